#include "perimere/real_basis.hpp"

#include <cmath>
#include <utility>

#include "perimere/error.hpp"

namespace perimere {

RealBasis::RealBasis(Eigen::MatrixXd u) : u_(std::move(u)) {
  if (u_.rows() == 0 || u_.rows() != u_.cols()) {
    throw InputError("basis must be a non-empty square matrix");
  }
  if (!u_.allFinite()) {
    throw InputError("basis has non-finite entries");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(u_);
  if (!lu.isInvertible()) {
    throw InputError("basis is singular");
  }
  cell_volume_ = std::abs(lu.determinant());
  inverse_ = lu.inverse();
  const Eigen::MatrixXd check = u_ * inverse_;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(u_.rows(), u_.cols());
  if ((check - eye).cwiseAbs().maxCoeff() > 1e-12) {
    throw InputError("basis is too ill-conditioned to invert within 1e-12");
  }
  inverse_norm_ = operator_norm(inverse_);
}

RealBasis RealBasis::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return RealBasis(Eigen::MatrixXd::Identity(n, n));
}

double operator_norm(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd gram = a.transpose() * a;
  if (gram.rows() <= 8) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
  }
  // Uneven start vector so it is not orthogonal to the top eigenvector of
  // symmetric test matrices.
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(gram.rows(), 1.0, 2.0).normalized();
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::VectorXd y = gram * x;
    const double norm = y.norm();
    if (norm == 0.0) {
      return 0.0;
    }
    y /= norm;
    const double next = y.dot(gram * y);
    x = y;
    if (std::abs(next - lambda) <= 1e-15 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace perimere
