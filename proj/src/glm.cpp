#include "jacobi/glm.hpp"

#include <cmath>
#include <string>

#include "jacobi/modes.hpp"
#include "jacobi/normal.hpp"

namespace jacobi {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Logit: return "logit";
    case Family::Probit: return "probit";
    case Family::Poisson: return "poisson";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "logit") return Family::Logit;
  if (name == "probit") return Family::Probit;
  if (name == "poisson") return Family::Poisson;
  throw Error(ErrorKind::ConfigError, "unknown family '" + std::string(name) + "'");
}

bool is_binary(Family family) { return family != Family::Poisson; }

std::string_view to_string(Schedule schedule) {
  return schedule == Schedule::Fixed ? "fixed" : "one-over-n";
}

Schedule parse_schedule(std::string_view name) {
  if (name == "fixed") return Schedule::Fixed;
  if (name == "one-over-n" || name == "one_over_n") return Schedule::OneOverN;
  throw Error(ErrorKind::ConfigError, "unknown schedule '" + std::string(name) + "'");
}

Shapes JacobiHyper::resolve(std::size_t n) const {
  if (schedule == Schedule::OneOverN) {
    if (n == 0) throw Error(ErrorKind::InvalidHyper, "one-over-n schedule needs n >= 1");
    const double inv = 1.0 / static_cast<double>(n);
    return {inv, inv};
  }
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidHyper,
                "prior shapes must be positive, got a=" + std::to_string(a) + ", b=" + std::to_string(b));
  }
  return {a, b};
}

JacobiHyper JacobiHyper::defaults(Family family) {
  if (family == Family::Poisson) return {1.0, 1.0, Schedule::Fixed};
  return {0.5, 0.5, Schedule::Fixed};
}

double latent_mode(Family family, double y, Shapes s) {
  switch (family) {
    case Family::Logit: return logit_mode(y, s.a, s.b);
    case Family::Probit: return probit_mode(y, s.a, s.b);
    case Family::Poisson: return poisson_mode(y, s.a, s.b);
  }
  return 0.0;
}

void validate_response(const Vector& y, Family family) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = y[i];
    const bool ok = is_binary(family) ? (v == 0.0 || v == 1.0)
                                      : (std::isfinite(v) && v >= 0.0 && v == std::floor(v));
    if (!ok) {
      throw Error(ErrorKind::InvalidResponse,
                  "response " + std::to_string(v) + " at index " + std::to_string(i) +
                      " is not valid for family " + std::string(to_string(family)));
    }
  }
}

Vector latent_vector(const Vector& y, Family family, const JacobiHyper& hyper,
                     std::size_t schedule_n) {
  validate_response(y, family);
  const Shapes shapes = hyper.resolve(schedule_n != 0 ? schedule_n : static_cast<std::size_t>(y.size()));
  Vector eta(y.size());
  if (is_binary(family)) {
    // Only two distinct responses; evaluate each mode once.
    double mode[2] = {0.0, 0.0};
    bool have[2] = {false, false};
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const int k = y[i] == 1.0 ? 1 : 0;
      if (!have[k]) {
        try {
          mode[k] = latent_mode(family, y[i], shapes);
        } catch (const Error& e) {
          throw Error(e.kind(), std::string(e.what()) + " (index " + std::to_string(i) + ")");
        }
        have[k] = true;
      }
      eta[i] = mode[k];
    }
    return eta;
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    try {
      eta[i] = latent_mode(family, y[i], shapes);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (index " + std::to_string(i) + ")");
    }
  }
  return eta;
}

FittedGLM fit_jacobi(const Matrix& X, const Vector& y, Family family, const JacobiHyper& hyper) {
  if (X.rows() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "design has " + std::to_string(X.rows()) + " rows but response has " +
                    std::to_string(y.size()));
  }
  FittedGLM fit;
  fit.family = family;
  fit.hyper = hyper;
  fit.n_train = static_cast<std::size_t>(y.size());
  fit.shapes = hyper.resolve(fit.n_train);
  fit.eta_hat = latent_vector(y, family, hyper);
  fit.beta = solve_normal_equations(X, fit.eta_hat);
  return fit;
}

Vector inverse_link(Family family, const Vector& eta) {
  switch (family) {
    case Family::Logit:
      return eta.unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
    case Family::Probit:
      return eta.unaryExpr([](double e) { return normal_cdf(e); });
    case Family::Poisson:
      return eta.array().exp().matrix();
  }
  return eta;
}

Vector predict_with(const Vector& beta, Family family, const Matrix& X0) {
  if (X0.cols() != beta.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "prediction design has " + std::to_string(X0.cols()) + " columns, model has " +
                    std::to_string(beta.size()));
  }
  return inverse_link(family, X0 * beta);
}

Vector predict(const FittedGLM& model, const Matrix& X0) {
  return predict_with(model.beta, model.family, X0);
}

}  // namespace jacobi
