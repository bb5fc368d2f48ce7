#include "jacobi/mle.hpp"

#include <cmath>
#include <string>

namespace jacobi {

namespace {

void require_canonical(Family family) {
  if (family == Family::Probit) {
    throw Error(ErrorKind::ConfigError, "MLE baseline supports logit and poisson only");
  }
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

double mle_log_likelihood(const Matrix& X, const Vector& y, Family family, const Vector& beta) {
  require_canonical(family);
  const Vector eta = X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (family == Family::Logit) {
      ll += y[i] * eta[i] - softplus(eta[i]);
    } else {
      ll += y[i] * eta[i] - std::exp(eta[i]) - std::lgamma(y[i] + 1.0);
    }
  }
  return ll;
}

double mle_deviance(const Matrix& X, const Vector& y, Family family, const Vector& beta) {
  require_canonical(family);
  const Vector eta = X * beta;
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (family == Family::Logit) {
      dev += 2.0 * (softplus(eta[i]) - y[i] * eta[i]);
    } else {
      const double mu = std::exp(eta[i]);
      const double sat = y[i] > 0 ? y[i] * std::log(y[i]) - y[i] : 0.0;
      dev += 2.0 * (sat - (y[i] * eta[i] - mu));
    }
  }
  return dev;
}

Vector mle_score(const Matrix& X, const Vector& y, Family family, const Vector& beta) {
  require_canonical(family);
  const Vector mu = inverse_link(family, X * beta);
  return X.transpose() * (y - mu);
}

MleFit fit_mle(const Matrix& X, const Vector& y, Family family, const MleOptions& options) {
  require_canonical(family);
  if (X.rows() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch, "design and response lengths differ");
  }
  validate_response(y, family);
  // Up-front rank check on the unweighted design.
  LeastSquaresProjector rank_check(X);

  const Eigen::Index n = X.rows();
  MleFit fit;
  fit.beta = Vector::Zero(X.cols());
  fit.deviance = mle_deviance(X, y, family, fit.beta);

  Matrix weighted(n, X.cols());
  Vector working(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    const Vector eta = X * fit.beta;
    const Vector mu = inverse_link(family, eta);
    const Vector score = X.transpose() * (y - mu);
    if (score.cwiseAbs().maxCoeff() <= options.score_tolerance) {
      fit.converged = true;
      fit.iterations = iter;
      return fit;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = std::max(family == Family::Logit ? mu[i] * (1.0 - mu[i]) : mu[i], 1e-300);
      const double sw = std::sqrt(w);
      weighted.row(i) = sw * X.row(i);
      working[i] = sw * (eta[i] + (y[i] - mu[i]) / w);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(weighted);
    if (qr.rank() < X.cols()) {
      throw Error(ErrorKind::Separation, "weighted design lost rank at iteration " + std::to_string(iter));
    }
    Vector candidate = qr.solve(working);

    double dev = mle_deviance(X, y, family, candidate);
    for (int halving = 0; halving < 30 && !(dev <= fit.deviance); ++halving) {
      candidate = 0.5 * (candidate + fit.beta);
      dev = mle_deviance(X, y, family, candidate);
    }
    if (!candidate.allFinite() || candidate.norm() > options.separation_norm) {
      throw Error(ErrorKind::Separation,
                  "coefficient norm exceeded " + std::to_string(options.separation_norm) +
                      " at iteration " + std::to_string(iter));
    }
    if (family == Family::Logit && dev < options.separation_deviance) {
      throw Error(ErrorKind::Separation, "deviance vanished at iteration " + std::to_string(iter) +
                                             ": the classes are perfectly separated");
    }
    fit.beta = candidate;
    fit.deviance = dev;
    fit.iterations = iter + 1;
  }
  const Vector score = mle_score(X, y, family, fit.beta);
  fit.converged = score.cwiseAbs().maxCoeff() <= options.score_tolerance;
  return fit;
}

}  // namespace jacobi
