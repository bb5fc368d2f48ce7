#pragma once

#include <cmath>
#include <numbers>

namespace jacobi {

template <typename Scalar>
Scalar normal_pdf(Scalar x) {
  return std::exp(Scalar(-0.5) * x * x) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
}

template <typename Scalar>
Scalar normal_cdf(Scalar x) {
  return Scalar(0.5) * std::erfc(-x / std::numbers::sqrt2_v<Scalar>);
}

/// log Phi(x), accurate in the far lower tail where Phi underflows.
template <typename Scalar>
Scalar log_normal_cdf(Scalar x) {
  if (x > Scalar(-30)) return std::log(normal_cdf(x));
  // Asymptotic series: Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8).
  const Scalar u = Scalar(1) / (x * x);
  const Scalar series = u * (Scalar(-1) + u * (Scalar(3) + u * (Scalar(-15) + u * Scalar(105))));
  return Scalar(-0.5) * x * x - std::log(-x) - Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) +
         std::log1p(series);
}

/// phi(x) / Phi(x) (inverse Mills ratio), stable for large negative x.
template <typename Scalar>
Scalar mills_ratio_lower(Scalar x) {
  if (x > Scalar(-30)) return normal_pdf(x) / normal_cdf(x);
  return std::exp(-Scalar(0.5) * x * x - Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) -
                  log_normal_cdf(x));
}

/// Phi^{-1}(p) from log p, for p <= 1/2. Acklam's rational approximation
/// followed by Newton refinement on log Phi.
template <typename Scalar>
Scalar normal_quantile_lower_log(Scalar log_p) {
  using std::exp;
  using std::log;
  using std::sqrt;
  Scalar x;
  const Scalar p = exp(log_p);
  if (log_p < log(Scalar(0.02425))) {
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    const Scalar q = sqrt(Scalar(-2) * log_p);
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131280241560e+01,  -1.328068155288572e+01};
    const Scalar q = p - Scalar(0.5);
    const Scalar r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  // Newton on g(x) = log Phi(x) - log p; g'(x) = phi(x)/Phi(x).
  for (int it = 0; it < 4; ++it) {
    const Scalar step = (log_normal_cdf(x) - log_p) / mills_ratio_lower(x);
    x -= step;
    if (std::abs(step) < Scalar(1e-15) * (Scalar(1) + std::abs(x))) break;
  }
  return x;
}

/// Phi^{-1} evaluated from the pair (log p, log(1 - p)); whichever tail is
/// smaller is used so neither end loses precision.
template <typename Scalar>
Scalar normal_quantile_log(Scalar log_p, Scalar log_one_minus_p) {
  if (log_p <= log_one_minus_p) return normal_quantile_lower_log(log_p);
  return -normal_quantile_lower_log(log_one_minus_p);
}

template <typename Scalar>
Scalar normal_quantile(Scalar p) {
  return normal_quantile_log(std::log(p), std::log1p(-p));
}

}  // namespace jacobi
