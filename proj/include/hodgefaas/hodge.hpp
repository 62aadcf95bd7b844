#pragma once

#include <optional>
#include <string>

#include <Eigen/SVD>

#include "hodgefaas/complex.hpp"
#include "hodgefaas/linalg.hpp"

namespace hodgefaas {

/// 1-cochain: one value per edge, relative to each edge's canonical
/// orientation. A negative value is flow against the stored direction.
struct EdgeFlow {
  Vector values;
  std::string metric;
};

/// 0-cochain, one value per node.
struct NodePotential {
  Vector values;
};

/// 2-cochain, one value per face.
struct FaceCochain {
  Vector values;
};

struct HodgeDecomposition {
  EdgeFlow gradient;
  EdgeFlow curl;
  EdgeFlow harmonic;
  NodePotential phi;
  FaceCochain psi;
  double energy_grad = 0.0;
  double energy_curl = 0.0;
  double energy_harm = 0.0;
  double energy_total = 0.0;
  double reconstruction_residual = 0.0;
};

enum class Component { kGradient, kCurl, kHarmonic };

/// Throws ValidationError if the flow is not indexed against `c` or has
/// non-finite entries.
void check_flow(const CellComplex& c, const EdgeFlow& f);

/// Orthogonal split f = B1^T phi + B2 psi + h. Factorizations of L0 and L2
/// are computed once, so one decomposer serves any number of windows.
class HodgeDecomposer {
 public:
  explicit HodgeDecomposer(const CellComplex& c, const RankTolerance& tol = {});

  /// phi = L0^+ (B1 f), f_grad = B1^T phi; psi = L2^+ (B2^T f),
  /// f_curl = B2 psi; h = f - f_grad - f_curl.
  HodgeDecomposition decompose(const EdgeFlow& f) const;

  const Matrix& b1() const { return b1_; }
  const Matrix& b2() const { return b2_; }

 private:
  Vector solve(const Eigen::BDCSVD<Matrix>& svd, double cut, const Vector& rhs) const;

  const CellComplex* complex_;
  Matrix b1_;
  Matrix b2_;
  Eigen::BDCSVD<Matrix> l0_svd_;
  Eigen::BDCSVD<Matrix> l2_svd_;
  double l0_cut_ = 0.0;
  double l2_cut_ = 0.0;
};

HodgeDecomposition decompose(const CellComplex& c, const EdgeFlow& f,
                             const RankTolerance& tol = {});

EdgeFlow project(const CellComplex& c, const EdgeFlow& f, Component which,
                 const RankTolerance& tol = {});

struct HarmonicStress {
  double value = 0.0;  // energy_harm / energy_total, in [0, 1]
  bool zero_flow = false;
};

HarmonicStress harmonic_stress(const HodgeDecomposition& d);

/// True when |h|_inf <= 1e-8 (1 + |f|), the tolerance of the harmonic
/// conditions; such a harmonic part is round-off.
bool harmonic_negligible(const HodgeDecomposition& d);

struct Equivalence {
  bool equivalent = false;
  double harmonic_residual_norm = 0.0;
  double threshold = 0.0;
};

/// f1 and f2 are equivalent iff the harmonic part of f1 - f2 has norm at
/// most eps * (1 + |f1 - f2|).
Equivalence flows_equivalent(const CellComplex& c, const EdgeFlow& f1, const EdgeFlow& f2,
                             double eps, const RankTolerance& tol = {});

}  // namespace hodgefaas
