#include "hodgefaas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace hodgefaas {

RankTolerance::RankTolerance(double absolute_floor, std::optional<double> relative_factor)
    : floor_(absolute_floor), relative_(relative_factor) {
  if (!(absolute_floor > 0.0) || !std::isfinite(absolute_floor))
    throw std::invalid_argument("rank tolerance floor must be positive and finite");
  if (relative_ && (!(*relative_ > 0.0) || !std::isfinite(*relative_)))
    throw std::invalid_argument("rank tolerance relative factor must be positive and finite");
}

double RankTolerance::relative_factor_for(std::size_t rows, std::size_t cols) const {
  if (relative_) return *relative_;
  auto dim = static_cast<double>(std::max<std::size_t>({rows, cols, 1}));
  return std::numeric_limits<double>::epsilon() * dim;
}

double RankTolerance::threshold(double sigma_max, std::size_t rows, std::size_t cols) const {
  return std::max(floor_, relative_factor_for(rows, cols) * sigma_max);
}

namespace {

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

}  // namespace

Vector min_norm_lstsq(const Matrix& a, const Vector& b, const RankTolerance& tol) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("min_norm_lstsq: matrix has " + std::to_string(a.rows()) +
                                " rows but right-hand side has " + std::to_string(b.size()));
  }
  if (a.size() == 0) return Vector::Zero(a.cols());
  check_finite(a, "min_norm_lstsq matrix");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cut = tol.threshold(s.size() ? s(0) : 0.0, a.rows(), a.cols());

  Vector ub = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < s.size(); ++i) ub(i) = s(i) > cut ? ub(i) / s(i) : 0.0;
  return svd.matrixV() * ub;
}

std::size_t numerical_rank(const Matrix& m, const RankTolerance& tol) {
  if (m.size() == 0) return 0;
  check_finite(m, "numerical_rank matrix");
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double cut = tol.threshold(s(0), m.rows(), m.cols());
  return static_cast<std::size_t>((s.array() > cut).count());
}

SymmetricEigen sym_eigs(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigs: matrix is not square");
  if (m.size() == 0) return {Vector(0), Matrix(0, 0)};
  check_finite(m, "sym_eigs matrix");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("sym_eigs: matrix is not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");
  }
  // Eigen returns eigenvalues in increasing order.
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eigs: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace hodgefaas
