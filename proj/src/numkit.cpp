#include "jacobi/numkit.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace jacobi {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidHyper: return "InvalidHyper";
    case ErrorKind::InvalidResponse: return "InvalidResponse";
    case ErrorKind::ImproperPosterior: return "ImproperPosterior";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Separation: return "Separation";
    case ErrorKind::InsufficientDraws: return "InsufficientDraws";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::RateOverflow: return "RateOverflow";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::DuplicateShard: return "DuplicateShard";
    case ErrorKind::MissingFeature: return "MissingFeature";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " contains non-finite entries");
  }
}

LeastSquaresProjector::LeastSquaresProjector(const Matrix& X) {
  if (X.rows() < X.cols() || X.cols() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "design has " + std::to_string(X.rows()) + " rows and " +
                    std::to_string(X.cols()) + " columns; need n >= p >= 1");
  }
  require_finite(X, "design matrix");
  qr_.compute(X);
  // Pivoted R has non-increasing |diagonal|; the ratio of its extremes bounds
  // the 2-norm condition number from below and tracks it closely in practice.
  const auto& r = qr_.matrixQR();
  const double largest = std::abs(r(0, 0));
  const double smallest = std::abs(r(X.cols() - 1, X.cols() - 1));
  condition_ = smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxConditionNumber)) {
    throw Error(ErrorKind::RankDeficient,
                "design condition estimate " + std::to_string(condition_) + " exceeds 1e12");
  }
}

Vector LeastSquaresProjector::solve(const Eigen::Ref<const Vector>& t) const {
  if (t.size() != qr_.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "response length " + std::to_string(t.size()) + " != design rows " +
                    std::to_string(qr_.rows()));
  }
  return qr_.solve(t);
}

Vector solve_normal_equations(const Matrix& X, const Vector& t) {
  if (t.size() != X.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "response length " + std::to_string(t.size()) + " != design rows " +
                    std::to_string(X.rows()));
  }
  return LeastSquaresProjector(X).solve(t);
}

Eigen::LLT<Matrix> checked_cholesky(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "cholesky: matrix is not square");
  }
  require_finite(A, "cholesky input");
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "cholesky: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "cholesky: matrix is not positive definite");
  }
  // LLT only fails on a non-positive pivot; a numerically singular matrix can
  // slip through with a pivot at rounding level.
  const auto diag = llt.matrixLLT().diagonal();
  const double ratio = diag.minCoeff() / diag.maxCoeff();
  if (!(ratio * ratio > 1e-14)) {
    throw Error(ErrorKind::NotPositiveDefinite, "cholesky: matrix is numerically singular");
  }
  return llt;
}

Matrix cholesky_solve(const Matrix& A, const Matrix& B) {
  if (B.rows() != A.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "cholesky_solve: right-hand side row mismatch");
  }
  return checked_cholesky(A).solve(B);
}

Vector solve_gram(const Matrix& gram, const Vector& rhs) {
  if (gram.rows() != gram.cols() || gram.rows() != rhs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "gram system dimensions disagree");
  }
  require_finite(gram, "gram matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  // cond(X) = sqrt(cond(X'X)).
  if (!(lo > 0.0) || std::sqrt(hi / lo) > kMaxConditionNumber) {
    throw Error(ErrorKind::RankDeficient, "pooled gram matrix is singular");
  }
  return gram.llt().solve(rhs);
}

}  // namespace jacobi
