#pragma once

#include <cstddef>

#include "jacobi/glm.hpp"

namespace jacobi {

struct MleFit {
  Vector beta;
  bool converged = false;
  std::size_t iterations = 0;
  double deviance = 0.0;
};

struct MleOptions {
  std::size_t max_iterations = 100;
  double score_tolerance = 1e-8;
  double separation_norm = 1e4;
  double separation_deviance = 1e-6;  // logit: a fit this close to perfect means separation
};

/// Fisher scoring (IRLS) for the canonical-link logit and poisson models.
/// Each iteration solves the weighted least-squares problem by QR of
/// sqrt(W) X; a step that increases the deviance is halved.
/// Throws Separation when the coefficient norm blows past `separation_norm`
/// or, for logit, when the deviance falls below `separation_deviance`.
MleFit fit_mle(const Matrix& X, const Vector& y, Family family, const MleOptions& options = {});

/// X'(y - mu): the log-likelihood gradient under a canonical link.
Vector mle_score(const Matrix& X, const Vector& y, Family family, const Vector& beta);

double mle_log_likelihood(const Matrix& X, const Vector& y, Family family, const Vector& beta);

double mle_deviance(const Matrix& X, const Vector& y, Family family, const Vector& beta);

}  // namespace jacobi
