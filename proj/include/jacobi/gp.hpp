#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "jacobi/dmr.hpp"
#include "jacobi/glm.hpp"

namespace jacobi {

struct KernelParams {
  double tau = 1.0;    // signal scale
  double rho = 1.0;    // inverse length scale
  double sigma = 0.1;  // latent noise SD

  void validate() const;
};

/// Exponential: tau * exp(-rho * d). SquaredExponential: tau * exp(-rho * d^2).
enum class KernelShape { Exponential, SquaredExponential };

std::string_view to_string(KernelShape shape);
KernelShape parse_kernel_shape(std::string_view name);

/// Full: S(X0,X0) - S(X0,X)[S+s^2 I]^{-1} S(X,X0).
/// CrossTermOnly: S(X0,X)[S+s^2 I]^{-1} S(X,X0), for strict replication of
/// the form that omits the prior term.
enum class CovarianceForm { Full, CrossTermOnly };

template <typename Scalar>
MatrixX<Scalar> kernel_matrix(const MatrixX<Scalar>& A, const MatrixX<Scalar>& B, const KernelParams& params,
                              KernelShape shape = KernelShape::Exponential) {
  if (A.cols() != B.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "kernel inputs have different column counts");
  }
  MatrixX<Scalar> K(A.rows(), B.rows());
  const Scalar tau = static_cast<Scalar>(params.tau);
  const Scalar rho = static_cast<Scalar>(params.rho);
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const Scalar sq = (A.row(i) - B.row(j)).squaredNorm();
      const Scalar arg = shape == KernelShape::Exponential ? std::sqrt(sq) : sq;
      K(i, j) = tau * std::exp(-rho * arg);
    }
  }
  return K;
}

struct GPModel {
  Matrix X_train;
  Vector beta;
  Vector eta_hat;
  KernelParams params;
  KernelShape shape = KernelShape::Exponential;
  Family family = Family::Probit;
  Eigen::LLT<Matrix> chol;  // of S(X,X) + sigma^2 I
  Vector alpha;             // [S + sigma^2 I]^{-1} (eta_hat - X beta)
};

struct LatentPrediction {
  Vector mean;
  Matrix cov;
};

/// Gram matrix S(X,X) + sigma^2 I.
Matrix gp_gram(const Matrix& X, const KernelParams& params, KernelShape shape);

/// Latent field fit: eta_hat from the family's posterior modes, beta by
/// projection, residual weights alpha by Cholesky solve.
GPModel gp_fit(const Matrix& X, const Vector& y, Family family, const JacobiHyper& hyper,
               const KernelParams& params, KernelShape shape = KernelShape::Exponential);

/// Binary classifier with probit-link latents.
GPModel gp_fit_binary(const Matrix& X, const Vector& y, const JacobiHyper& hyper, const KernelParams& params,
                      KernelShape shape = KernelShape::Exponential);

LatentPrediction gp_predict_latent(const GPModel& model, const Matrix& X0,
                                   CovarianceForm form = CovarianceForm::Full);

/// Predictive mean only (skips the m x m covariance).
Vector gp_predict_mean(const GPModel& model, const Matrix& X0);

/// Phi(mean) element-wise.
Vector gp_predict_proba(const GPModel& model, const Matrix& X0);

struct GPMulticlassModel {
  Matrix X_train;
  Matrix betas;    // p x K
  Matrix eta_hat;  // n x K
  Matrix alpha;    // n x K
  KernelParams params;
  KernelShape shape = KernelShape::Exponential;
  Eigen::LLT<Matrix> chol;
};

/// K per-class latent fields with Poisson-mode latents sharing one
/// factorization of the Gram matrix.
GPMulticlassModel gp_fit_multiclass(const Matrix& X, const CountTable& Y, const JacobiHyper& hyper,
                                    const KernelParams& params, KernelShape shape = KernelShape::Exponential);

/// m x K matrix of latent predictive means.
Matrix gp_multiclass_latent(const GPMulticlassModel& model, const Matrix& X0);

Matrix gp_multiclass_proba(const GPMulticlassModel& model, const Matrix& X0);

std::vector<int> gp_multiclass_predict(const GPMulticlassModel& model, const Matrix& X0);

}  // namespace jacobi
