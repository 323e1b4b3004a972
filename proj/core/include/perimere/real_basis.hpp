#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace perimere {

/// Real d x d lattice basis U (columns are basis vectors) with its inverse,
/// |det U| and the operator norm of U^-1 cached at construction.
class RealBasis {
 public:
  /// Throws InputError when U is empty, not square, or numerically singular.
  explicit RealBasis(Eigen::MatrixXd u);

  static RealBasis identity(std::size_t d);

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const Eigen::MatrixXd& matrix() const { return u_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  /// vol_d of the unit cell.
  double cell_volume() const { return cell_volume_; }
  /// Largest singular value of U^-1.
  double inverse_norm() const { return inverse_norm_; }

 private:
  Eigen::MatrixXd u_;
  Eigen::MatrixXd inverse_;
  double cell_volume_ = 0.0;
  double inverse_norm_ = 0.0;
};

/// Largest singular value of `a`. Uses a symmetric eigensolve of a^T a for
/// d <= 8 and power iteration above.
double operator_norm(const Eigen::MatrixXd& a);

}  // namespace perimere
