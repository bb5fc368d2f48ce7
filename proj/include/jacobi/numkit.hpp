#pragma once

#include <Eigen/Dense>

#include "jacobi/errors.hpp"

namespace jacobi {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

/// Designs whose estimated 2-norm condition number exceeds this are rejected.
inline constexpr double kMaxConditionNumber = 1e12;

/// Least-squares projector onto the column space of a fixed design.
///
/// The factorization (column-pivoting Householder QR of X) is computed once;
/// `solve` can then be applied to any number of right-hand sides. This is the
/// operational form of beta = (X'X)^{-1} X' t without ever forming X'X.
class LeastSquaresProjector {
 public:
  explicit LeastSquaresProjector(const Matrix& X);

  Vector solve(const Eigen::Ref<const Vector>& t) const;

  Eigen::Index rows() const { return qr_.rows(); }
  Eigen::Index cols() const { return qr_.cols(); }
  double condition_estimate() const { return condition_; }

 private:
  Eigen::ColPivHouseholderQR<Matrix> qr_;
  double condition_ = 0.0;
};

/// argmin_beta ||X beta - t||^2. Throws RankDeficient or DimensionMismatch.
Vector solve_normal_equations(const Matrix& X, const Vector& t);

/// Solves A * result = B for symmetric positive definite A.
Matrix cholesky_solve(const Matrix& A, const Matrix& B);

/// Cholesky factor with the checks of `cholesky_solve` applied up front.
Eigen::LLT<Matrix> checked_cholesky(const Matrix& A);

/// Solves the p x p system G beta = r for a Gram matrix G = X'X.
Vector solve_gram(const Matrix& gram, const Vector& rhs);

/// Throws NonFinite unless every entry is finite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);

}  // namespace jacobi
