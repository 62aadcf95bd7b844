#include <random>

#include "doctest.h"

#include "hodgefaas/error.hpp"
#include "hodgefaas/topology.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace hodgefaas;

namespace {

struct Triple {
  std::size_t b0, b1, b2;
};

/// Rank-nullity over Q on the integer incidence matrices.
Triple exact_betti(const CellComplex& c) {
  auto r1 = oracle::exact_rank(oracle::b1_by_definition(c));
  auto r2 = oracle::exact_rank(incidence_edge_face(c));
  return {c.num_nodes() - r1, c.num_edges() - r1 - r2, c.num_faces() - r2};
}

void check_all_routes(const CellComplex& c) {
  auto b = betti(c);
  auto ex = exact_betti(c);
  CHECK(b.beta0 == ex.b0);
  CHECK(b.beta1 == ex.b1);
  CHECK(b.beta2 == ex.b2);
  CHECK(b.beta0 == connected_components(c));
  CHECK(static_cast<long>(c.num_nodes()) - static_cast<long>(c.num_edges()) +
            static_cast<long>(c.num_faces()) ==
        static_cast<long>(b.beta0) - static_cast<long>(b.beta1) + static_cast<long>(b.beta2));
}

Matrix projector(const std::vector<EdgeFlow>& basis, Eigen::Index n) {
  Matrix p = Matrix::Zero(n, n);
  for (auto& v : basis) p += v.values * v.values.transpose();
  return p;
}

}  // namespace

TEST_CASE("betti: examples") {
  auto open = betti(shapes::unfilled_triangle());
  CHECK(open.beta0 == 1);
  CHECK(open.beta1 == 1);
  CHECK(open.beta2 == 0);
  auto filled = betti(shapes::filled_triangle());
  CHECK(filled.beta0 == 1);
  CHECK(filled.beta1 == 0);
  CHECK(filled.beta2 == 0);
  CHECK(betti(shapes::triangle_with_isolated({"y", "z"})).beta0 == 3);
  CHECK(betti(shapes::two_hole_theta()).beta1 == 2);
}

TEST_CASE("betti: reports the tolerance used") {
  auto b = betti(shapes::unfilled_triangle(), RankTolerance(1e-7, 1e-12));
  CHECK(b.tol_used.absolute_floor() == 1e-7);
  REQUIRE(b.tol_used.relative_factor().has_value());
  CHECK(*b.tol_used.relative_factor() == 1e-12);
}

TEST_CASE("betti: a closed surface has beta2 = 1") {
  // Boundary of a tetrahedron: 4 triangles, oriented outward.
  ComplexDescription d;
  d.nodes = {{"0", ""}, {"1", ""}, {"2", ""}, {"3", ""}};
  d.edges = {{"01", "0", "1", ""}, {"02", "0", "2", ""}, {"03", "0", "3", ""},
             {"12", "1", "2", ""}, {"13", "1", "3", ""}, {"23", "2", "3", ""}};
  d.faces = {{"123", {{"12", 1}, {"23", 1}, {"13", -1}}, ""},
             {"023", {{"02", 1}, {"23", 1}, {"03", -1}}, ""},
             {"013", {{"01", 1}, {"13", 1}, {"03", -1}}, ""},
             {"012", {{"01", 1}, {"12", 1}, {"02", -1}}, ""}};
  auto c = CellComplex::build(d);
  auto b = betti(c);
  CHECK(b.beta0 == 1);
  CHECK(b.beta1 == 0);
  CHECK(b.beta2 == 1);
  check_all_routes(c);
}

TEST_CASE("harmonic_basis: examples") {
  CHECK(harmonic_basis(shapes::filled_triangle()).empty());
  auto basis = harmonic_basis(shapes::unfilled_triangle());
  REQUIRE(basis.size() == 1);
  CHECK(basis[0].values.norm() == doctest::Approx(1.0));
  // Projector onto span{(1,1,1)/sqrt 3} is J/3.
  Matrix p = projector(basis, 3);
  CHECK((p - Matrix::Constant(3, 3, 1.0 / 3.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectrum: examples") {
  auto l0 = spectrum(shapes::unfilled_triangle(), 0);
  REQUIRE(l0.size() == 3);
  CHECK(std::abs(l0[0]) < 1e-12);
  CHECK(l0[1] == doctest::Approx(3));
  CHECK(l0[2] == doctest::Approx(3));
  CHECK(spectrum(shapes::unfilled_triangle(), 2).empty());
  for (double v : spectrum(shapes::filled_triangle(), 1)) CHECK(v == doctest::Approx(3));
  CHECK_THROWS_AS(spectrum(shapes::filled_triangle(), 4), std::invalid_argument);
}

TEST_CASE("spectral_gap: examples") {
  CHECK(spectral_gap({0, 3, 3}).value == 3);
  auto degenerate = spectral_gap({0, 0, 0});
  CHECK(degenerate.value == 0);
  CHECK_FALSE(degenerate.note.empty());
  CHECK(spectral_gap({0, 1e-14, 2}, RankTolerance(1e-10)).value == 2);
  auto empty = spectral_gap({});
  CHECK(empty.value == 0);
  CHECK_FALSE(empty.note.empty());
}

TEST_CASE("connected_components: examples") {
  CHECK(connected_components(shapes::unfilled_triangle()) == 1);
  CHECK(connected_components(shapes::triangle_with_isolated({"y", "z"})) == 3);
}

TEST_CASE("property: Betti routes agree on random complexes") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 50; ++trial) check_all_routes(oracle::random_complex(rng));
}

TEST_CASE("property: isolated node raises beta0 only") {
  std::mt19937_64 rng(405);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = oracle::random_description(rng);
    auto before = betti(CellComplex::build(d));
    d.nodes.push_back({"lonely", ""});
    auto after = betti(CellComplex::build(d));
    CHECK(after.beta0 == before.beta0 + 1);
    CHECK(after.beta1 == before.beta1);
    CHECK(after.beta2 == before.beta2);
  }
}

TEST_CASE("property: filling an independent cycle removes one hole") {
  std::mt19937_64 rng(406);
  int exercised = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto d = oracle::random_description(rng, {20, 50, 10});
    auto with_faces = d;
    if (with_faces.faces.empty()) continue;
    auto extra = with_faces.faces.back();
    with_faces.faces.pop_back();
    auto base = CellComplex::build(with_faces);
    auto r_before = oracle::exact_rank(incidence_edge_face(base));
    with_faces.faces.push_back(extra);
    auto filled = CellComplex::build(with_faces);
    auto r_after = oracle::exact_rank(incidence_edge_face(filled));
    if (r_after != r_before + 1) continue;
    ++exercised;
    CHECK(betti(filled).beta1 + 1 == betti(base).beta1);
  }
  CHECK(exercised > 10);
}

TEST_CASE("property: eigen residuals of returned spectra") {
  std::mt19937_64 rng(407);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = oracle::random_complex(rng);
    for (int k = 0; k <= 2; ++k) {
      Matrix l = laplacian(c, k);
      auto eigs = spectrum(c, k);
      REQUIRE(eigs.size() == static_cast<std::size_t>(l.rows()));
      if (eigs.empty()) continue;
      auto e = sym_eigs(l);
      double norm = std::max(1.0, l.norm());
      for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        CHECK(e.values(i) == doctest::Approx(eigs[static_cast<std::size_t>(i)]));
        CHECK((l * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() <= 1e-8 * norm);
      }
    }
  }
}

TEST_CASE("property: harmonic basis spans ker L1") {
  std::mt19937_64 rng(408);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = oracle::random_complex(rng);
    auto basis = harmonic_basis(c);
    Matrix l1 = laplacian(c, 1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK((l1 * basis[i].values).norm() <= 1e-8 * std::max(1.0, l1.norm()));
      for (std::size_t j = 0; j < basis.size(); ++j)
        CHECK(basis[i].values.dot(basis[j].values) == doctest::Approx(i == j ? 1.0 : 0.0));
    }
    // Same subspace as the full-pivot LU kernel of L1.
    if (basis.empty()) continue;
    Eigen::FullPivLU<Matrix> lu(l1);
    lu.setThreshold(1e-9);
    Matrix k = lu.kernel();
    Eigen::HouseholderQR<Matrix> qr(k);
    Matrix q = Matrix(qr.householderQ()).leftCols(k.cols());
    Matrix p = q * q.transpose();
    CHECK((p - projector(basis, l1.rows())).cwiseAbs().maxCoeff() <= 1e-8);
  }
}
