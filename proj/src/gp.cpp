#include "jacobi/gp.hpp"

#include <string>

#include "jacobi/normal.hpp"

namespace jacobi {

void KernelParams::validate() const {
  if (!(tau > 0.0) || !(rho >= 0.0) || !(sigma >= 0.0) || !std::isfinite(tau) || !std::isfinite(rho) ||
      !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidHyper, "kernel parameters need tau > 0, rho >= 0, sigma >= 0");
  }
}

std::string_view to_string(KernelShape shape) {
  return shape == KernelShape::Exponential ? "exponential" : "squared_exponential";
}

KernelShape parse_kernel_shape(std::string_view name) {
  if (name == "exponential") return KernelShape::Exponential;
  if (name == "squared_exponential") return KernelShape::SquaredExponential;
  throw Error(ErrorKind::ConfigError, "unknown kernel '" + std::string(name) + "'");
}

Matrix gp_gram(const Matrix& X, const KernelParams& params, KernelShape shape) {
  Matrix gram = kernel_matrix<double>(X, X, params, shape);
  gram.diagonal().array() += params.sigma * params.sigma;
  return gram;
}

GPModel gp_fit(const Matrix& X, const Vector& y, Family family, const JacobiHyper& hyper,
               const KernelParams& params, KernelShape shape) {
  params.validate();
  if (X.rows() != y.size()) throw Error(ErrorKind::DimensionMismatch, "design and response lengths differ");
  GPModel model;
  model.X_train = X;
  model.params = params;
  model.shape = shape;
  model.family = family;
  model.eta_hat = latent_vector(y, family, hyper);
  model.beta = solve_normal_equations(X, model.eta_hat);
  model.chol = checked_cholesky(gp_gram(X, params, shape));
  model.alpha = model.chol.solve(model.eta_hat - X * model.beta);
  return model;
}

GPModel gp_fit_binary(const Matrix& X, const Vector& y, const JacobiHyper& hyper, const KernelParams& params,
                      KernelShape shape) {
  return gp_fit(X, y, Family::Probit, hyper, params, shape);
}

Vector gp_predict_mean(const GPModel& model, const Matrix& X0) {
  if (X0.cols() != model.X_train.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "test design column count differs from training design");
  }
  const Matrix cross = kernel_matrix<double>(X0, model.X_train, model.params, model.shape);
  return X0 * model.beta + cross * model.alpha;
}

LatentPrediction gp_predict_latent(const GPModel& model, const Matrix& X0, CovarianceForm form) {
  if (X0.cols() != model.X_train.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "test design column count differs from training design");
  }
  const Matrix cross = kernel_matrix<double>(X0, model.X_train, model.params, model.shape);
  LatentPrediction out;
  out.mean = X0 * model.beta + cross * model.alpha;
  // L^{-1} S(X,X0); the quadratic form is V'V.
  const Matrix v = model.chol.matrixL().solve(cross.transpose());
  Matrix explained = v.transpose() * v;
  if (form == CovarianceForm::Full) {
    out.cov = kernel_matrix<double>(X0, X0, model.params, model.shape) - explained;
  } else {
    out.cov = std::move(explained);
  }
  // Exact symmetry; the two triangles differ only by rounding.
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

Vector gp_predict_proba(const GPModel& model, const Matrix& X0) {
  return gp_predict_mean(model, X0).unaryExpr([](double m) { return normal_cdf(m); });
}

GPMulticlassModel gp_fit_multiclass(const Matrix& X, const CountTable& Y, const JacobiHyper& hyper,
                                    const KernelParams& params, KernelShape shape) {
  params.validate();
  Y.validate();
  if (X.rows() != Y.rows()) throw Error(ErrorKind::DimensionMismatch, "design and count-table rows differ");
  GPMulticlassModel model;
  model.X_train = X;
  model.params = params;
  model.shape = shape;
  model.chol = checked_cholesky(gp_gram(X, params, shape));
  const LeastSquaresProjector projector(X);
  const Eigen::Index K = Y.classes();
  model.betas.resize(X.cols(), K);
  model.eta_hat.resize(X.rows(), K);
  model.alpha.resize(X.rows(), K);
  for (Eigen::Index k = 0; k < K; ++k) {
    model.eta_hat.col(k) = latent_vector(Y.counts.col(k), Family::Poisson, hyper);
    model.betas.col(k) = projector.solve(model.eta_hat.col(k));
    model.alpha.col(k) = model.chol.solve(Vector(model.eta_hat.col(k) - X * model.betas.col(k)));
  }
  return model;
}

Matrix gp_multiclass_latent(const GPMulticlassModel& model, const Matrix& X0) {
  if (X0.cols() != model.X_train.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "test design column count differs from training design");
  }
  const Matrix cross = kernel_matrix<double>(X0, model.X_train, model.params, model.shape);
  return X0 * model.betas + cross * model.alpha;
}

Matrix gp_multiclass_proba(const GPMulticlassModel& model, const Matrix& X0) {
  return softmax_rows(gp_multiclass_latent(model, X0));
}

std::vector<int> gp_multiclass_predict(const GPMulticlassModel& model, const Matrix& X0) {
  return argmax_rows(gp_multiclass_latent(model, X0));
}

}  // namespace jacobi
