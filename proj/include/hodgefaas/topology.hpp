#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hodgefaas/complex.hpp"
#include "hodgefaas/hodge.hpp"
#include "hodgefaas/linalg.hpp"

namespace hodgefaas {

struct BettiNumbers {
  std::size_t beta0 = 0;
  std::size_t beta1 = 0;
  std::size_t beta2 = 0;
  RankTolerance tol_used;
};

/// Kernel dimensions of L0, L1, L2. Cross-checked against the rank-nullity
/// formulas on B1 and B2; throws NumericalError if the two disagree.
BettiNumbers betti(const CellComplex& c, const RankTolerance& tol = {});

/// Orthonormal basis of ker L1 (beta1 vectors). Columns are determined up to
/// an orthogonal rotation; compare subspaces, not raw vectors.
std::vector<EdgeFlow> harmonic_basis(const CellComplex& c, const RankTolerance& tol = {});

/// Eigenvalues of L_k in ascending order.
std::vector<double> spectrum(const CellComplex& c, int degree);

struct SpectralGap {
  double value = 0.0;
  std::string note;  // set when the list is empty or has no nonzero eigenvalue
};

/// Smallest eigenvalue above the zero threshold of `tol`, or 0 if none.
SpectralGap spectral_gap(const std::vector<double>& ascending, const RankTolerance& tol = {});

/// Weakly connected components by traversal, ignoring edge direction.
std::size_t connected_components(const CellComplex& c);

}  // namespace hodgefaas
