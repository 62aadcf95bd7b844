#include "hodgefaas/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hodgefaas/error.hpp"

namespace hodgefaas {

void check_flow(const CellComplex& c, const EdgeFlow& f) {
  if (static_cast<std::size_t>(f.values.size()) != c.num_edges()) {
    throw ValidationError("flow has " + std::to_string(f.values.size()) +
                          " values but the complex has " + std::to_string(c.num_edges()) +
                          " edges");
  }
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values(i)))
      throw ValidationError("flow value on edge '" + c.edges()[i].id + "' is not finite");
  }
}

namespace {

Eigen::BDCSVD<Matrix> factor(const Matrix& m) {
  if (m.size() == 0) return {};
  return Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

double cut_for(const Eigen::BDCSVD<Matrix>& svd, const Matrix& m, const RankTolerance& tol) {
  if (m.size() == 0) return 0.0;
  return tol.threshold(svd.singularValues()(0), m.rows(), m.cols());
}

}  // namespace

HodgeDecomposer::HodgeDecomposer(const CellComplex& c, const RankTolerance& tol)
    : complex_(&c), b1_(incidence_node_edge(c)), b2_(incidence_edge_face(c)) {
  Matrix l0 = b1_ * b1_.transpose();
  Matrix l2 = b2_.transpose() * b2_;
  l0_svd_ = factor(l0);
  l2_svd_ = factor(l2);
  l0_cut_ = cut_for(l0_svd_, l0, tol);
  l2_cut_ = cut_for(l2_svd_, l2, tol);
}

Vector HodgeDecomposer::solve(const Eigen::BDCSVD<Matrix>& svd, double cut,
                              const Vector& rhs) const {
  if (rhs.size() == 0) return Vector(0);
  const Vector& s = svd.singularValues();
  Vector y = svd.matrixU().transpose() * rhs;
  for (Eigen::Index i = 0; i < s.size(); ++i) y(i) = s(i) > cut ? y(i) / s(i) : 0.0;
  return svd.matrixV() * y;
}

HodgeDecomposition HodgeDecomposer::decompose(const EdgeFlow& f) const {
  check_flow(*complex_, f);
  const Vector& x = f.values;

  HodgeDecomposition d;
  d.phi.values = solve(l0_svd_, l0_cut_, b1_ * x);
  d.psi.values = solve(l2_svd_, l2_cut_, b2_.transpose() * x);

  d.gradient = {b1_.transpose() * d.phi.values, f.metric};
  d.curl = {b2_ * d.psi.values, f.metric};
  if (d.curl.values.size() != x.size()) d.curl.values = Vector::Zero(x.size());
  d.harmonic = {x - d.gradient.values - d.curl.values, f.metric};

  d.energy_grad = d.gradient.values.squaredNorm();
  d.energy_curl = d.curl.values.squaredNorm();
  d.energy_harm = d.harmonic.values.squaredNorm();
  d.energy_total = x.squaredNorm();
  d.reconstruction_residual =
      (x - (d.gradient.values + d.curl.values + d.harmonic.values)).norm();
  return d;
}

HodgeDecomposition decompose(const CellComplex& c, const EdgeFlow& f, const RankTolerance& tol) {
  check_flow(c, f);
  return HodgeDecomposer(c, tol).decompose(f);
}

EdgeFlow project(const CellComplex& c, const EdgeFlow& f, Component which,
                 const RankTolerance& tol) {
  auto d = decompose(c, f, tol);
  switch (which) {
    case Component::kGradient:
      return d.gradient;
    case Component::kCurl:
      return d.curl;
    case Component::kHarmonic:
      return d.harmonic;
  }
  throw std::invalid_argument("unknown component");
}

HarmonicStress harmonic_stress(const HodgeDecomposition& d) {
  if (!(d.energy_total > 0.0)) return {0.0, true};
  double s = d.energy_harm / d.energy_total;
  return {std::clamp(s, 0.0, 1.0), false};
}

bool harmonic_negligible(const HodgeDecomposition& d) {
  const Vector& h = d.harmonic.values;
  if (h.size() == 0) return true;
  return h.cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + std::sqrt(d.energy_total));
}

Equivalence flows_equivalent(const CellComplex& c, const EdgeFlow& f1, const EdgeFlow& f2,
                             double eps, const RankTolerance& tol) {
  check_flow(c, f1);
  check_flow(c, f2);
  EdgeFlow diff{f1.values - f2.values, f1.metric};
  Equivalence out;
  out.harmonic_residual_norm = project(c, diff, Component::kHarmonic, tol).values.norm();
  out.threshold = eps * (1.0 + diff.values.norm());
  out.equivalent = out.harmonic_residual_norm <= out.threshold;
  return out;
}

}  // namespace hodgefaas
