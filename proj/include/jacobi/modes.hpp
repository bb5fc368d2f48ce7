#pragma once

// Per-observation posterior modes of the linear predictor eta under a
// conjugate prior on the natural parameter, transported through the link.

#include <cmath>
#include <string>

#include "jacobi/errors.hpp"
#include "jacobi/normal.hpp"

namespace jacobi {

namespace detail {
inline std::string shape_message(const char* family, double y, double a, double b) {
  return std::string(family) + " mode undefined for y=" + std::to_string(y) +
         ", a=" + std::to_string(a) + ", b=" + std::to_string(b);
}
}  // namespace detail

/// ln((y + a) / (b + 1 - y)): mode of Skew-Logistic(y + a, 1 - y + b).
template <typename Scalar>
Scalar logit_mode(Scalar y, Scalar a, Scalar b) {
  if (!(y + a > 0) || !(b + 1 - y > 0)) {
    throw Error(ErrorKind::InvalidHyper, detail::shape_message("logit", y, a, b));
  }
  return std::log((y + a) / (b + 1 - y));
}

/// ln((y + a) / (1 + b)): mode of log-Gamma(y + a, 1 + b).
template <typename Scalar>
Scalar poisson_mode(Scalar y, Scalar a, Scalar b) {
  if (!(y + a > 0) || !(1 + b > 0)) {
    throw Error(ErrorKind::InvalidHyper, detail::shape_message("poisson", y, a, b));
  }
  return std::log((y + a) / (1 + b));
}

/// d/d eta of log[Phi^(y+a-1) (1-Phi)^(b-y) phi]; strictly decreasing in eta
/// whenever y + a > 0 and b - y + 1 > 0.
template <typename Scalar>
Scalar probit_log_posterior_slope(Scalar eta, Scalar y, Scalar a, Scalar b) {
  return (y + a - 1) * mills_ratio_lower(eta) - (b - y) * mills_ratio_lower(-eta) - eta;
}

template <typename Scalar>
Scalar probit_log_posterior(Scalar eta, Scalar y, Scalar a, Scalar b) {
  return (y + a - 1) * log_normal_cdf(eta) + (b - y) * log_normal_cdf(-eta) - Scalar(0.5) * eta * eta;
}

inline constexpr int kProbitMaxIterations = 200;
inline constexpr double kProbitStationarity = 1e-10;

/// Mode of Skew-Gaussian(y + a, b - y + 1): safeguarded Newton on the slope,
/// started at 0 inside the bracket [-12, 12] (widened if the root lies outside).
template <typename Scalar>
Scalar probit_mode(Scalar y, Scalar a, Scalar b) {
  if (!(y + a > 0) || !(b - y + 1 > 0)) {
    throw Error(ErrorKind::ImproperPosterior, detail::shape_message("probit", y, a, b));
  }
  auto slope = [&](Scalar eta) { return probit_log_posterior_slope(eta, y, a, b); };
  // M'(x) for the inverse Mills ratio M = phi/Phi.
  auto mills_derivative = [](Scalar x) {
    const Scalar m = mills_ratio_lower(x);
    return -m * (x + m);
  };
  auto curvature = [&](Scalar eta) {
    return (y + a - 1) * mills_derivative(eta) + (b - y) * mills_derivative(-eta) - 1;
  };

  Scalar lo = -12;
  Scalar hi = 12;
  while (slope(lo) < 0 && lo > Scalar(-1e3)) lo *= 2;
  while (slope(hi) > 0 && hi < Scalar(1e3)) hi *= 2;

  Scalar eta = 0;
  for (int it = 0; it < kProbitMaxIterations; ++it) {
    const Scalar g = slope(eta);
    if (std::abs(g) <= Scalar(kProbitStationarity)) return eta;
    if (g > 0) {
      lo = eta;
    } else {
      hi = eta;
    }
    Scalar next = eta - g / curvature(eta);
    if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
    if (next == eta) return eta;
    eta = next;
  }
  throw Error(ErrorKind::NoConvergence, detail::shape_message("probit", y, a, b));
}

}  // namespace jacobi
