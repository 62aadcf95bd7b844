#pragma once

#include <cstddef>
#include <optional>

#include "hodgefaas/complex.hpp"

namespace hodgefaas {

/// Threshold below which singular values (and PSD eigenvalues) count as
/// zero: max(absolute_floor, relative_factor * sigma_max). When
/// relative_factor is unset it defaults to machine epsilon times the
/// largest matrix dimension.
class RankTolerance {
 public:
  static constexpr double kDefaultFloor = 1e-10;

  RankTolerance() = default;
  explicit RankTolerance(double absolute_floor,
                         std::optional<double> relative_factor = std::nullopt);

  double absolute_floor() const { return floor_; }
  const std::optional<double>& relative_factor() const { return relative_; }

  /// Relative factor actually used for a matrix with the given shape.
  double relative_factor_for(std::size_t rows, std::size_t cols) const;
  double threshold(double sigma_max, std::size_t rows, std::size_t cols) const;

 private:
  double floor_ = kDefaultFloor;
  std::optional<double> relative_;
};

/// x = A^+ b, the minimal-norm minimizer of |Ax - b|, via SVD.
Vector min_norm_lstsq(const Matrix& a, const Vector& b, const RankTolerance& tol = {});

std::size_t numerical_rank(const Matrix& m, const RankTolerance& tol = {});

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, same order as values
};

/// Throws std::invalid_argument unless |M - M^T| <= 1e-12 |M| (max norm).
SymmetricEigen sym_eigs(const Matrix& m);

}  // namespace hodgefaas
