#include "hodgefaas/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "hodgefaas/error.hpp"

namespace hodgefaas {

namespace {

std::size_t nullity(const Matrix& square, const RankTolerance& tol) {
  return static_cast<std::size_t>(square.rows()) - numerical_rank(square, tol);
}

}  // namespace

BettiNumbers betti(const CellComplex& c, const RankTolerance& tol) {
  const auto [b1, b2] = incidence(c);
  BettiNumbers out;
  out.tol_used = tol;
  out.beta0 = nullity(b1 * b1.transpose(), tol);
  out.beta1 = nullity(b1.transpose() * b1 + b2 * b2.transpose(), tol);
  out.beta2 = nullity(b2.transpose() * b2, tol);

  const std::size_t r1 = numerical_rank(b1, tol);
  const std::size_t r2 = numerical_rank(b2, tol);
  const std::size_t rn0 = c.num_nodes() - r1;
  const std::size_t rn1 = c.num_edges() - r1 - r2;
  const std::size_t rn2 = c.num_faces() - r2;
  if (rn0 != out.beta0 || rn1 != out.beta1 || rn2 != out.beta2) {
    throw NumericalError("Betti numbers disagree: kernel dimensions (" +
                         std::to_string(out.beta0) + ", " + std::to_string(out.beta1) + ", " +
                         std::to_string(out.beta2) + ") vs rank-nullity (" +
                         std::to_string(rn0) + ", " + std::to_string(rn1) + ", " +
                         std::to_string(rn2) + "); adjust the rank tolerance");
  }
  return out;
}

std::vector<EdgeFlow> harmonic_basis(const CellComplex& c, const RankTolerance& tol) {
  const std::size_t m = c.num_edges();
  if (m == 0) return {};
  const Matrix l1 = laplacian(c, 1);
  const auto eig = sym_eigs(l1);
  const double top = eig.values.cwiseAbs().maxCoeff();
  const double cut = tol.threshold(top, m, m);

  Eigen::Index k = 0;
  while (k < eig.values.size() && eig.values(k) <= cut) ++k;
  if (k == 0) return {};

  // Re-orthonormalize the kernel block; eigenvectors of a degenerate
  // eigenvalue are only orthonormal up to solver accuracy.
  Matrix block = eig.vectors.leftCols(k);
  Eigen::HouseholderQR<Matrix> qr(block);
  Matrix q = qr.householderQ() * Matrix::Identity(block.rows(), k);

  std::vector<EdgeFlow> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) out.push_back({q.col(j), "harmonic basis"});
  return out;
}

std::vector<double> spectrum(const CellComplex& c, int degree) {
  const auto eig = sym_eigs(laplacian(c, degree));
  return {eig.values.data(), eig.values.data() + eig.values.size()};
}

SpectralGap spectral_gap(const std::vector<double>& ascending, const RankTolerance& tol) {
  if (ascending.empty()) return {0.0, "empty spectrum"};
  double top = 0.0;
  for (double v : ascending) top = std::max(top, std::abs(v));
  const double cut = tol.threshold(top, ascending.size(), ascending.size());
  for (double v : ascending)
    if (v > cut) return {v, ""};
  return {0.0, "no eigenvalue above the zero threshold"};
}

std::size_t connected_components(const CellComplex& c) {
  std::vector<std::size_t> parent(c.num_nodes());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t count = c.num_nodes();
  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    auto a = find(c.edge_tail(e));
    auto b = find(c.edge_head(e));
    if (a != b) {
      parent[a] = b;
      --count;
    }
  }
  return count;
}

}  // namespace hodgefaas
