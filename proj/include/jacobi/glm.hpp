#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "jacobi/numkit.hpp"

namespace jacobi {

enum class Family { Logit, Probit, Poisson };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

bool is_binary(Family family);

enum class Schedule { Fixed, OneOverN };

std::string_view to_string(Schedule schedule);
Schedule parse_schedule(std::string_view name);

/// Effective prior shapes after schedule resolution.
struct Shapes {
  double a;
  double b;
};

/// Beta (binary families) or Gamma (poisson) prior shapes on the natural
/// parameter. Under OneOverN the stored a, b are ignored and a = b = 1/n.
struct JacobiHyper {
  double a = 0.5;
  double b = 0.5;
  Schedule schedule = Schedule::Fixed;

  Shapes resolve(std::size_t n) const;

  static JacobiHyper defaults(Family family);
  static JacobiHyper one_over_n() { return {1.0, 1.0, Schedule::OneOverN}; }
};

struct FittedGLM {
  Vector beta;
  Family family = Family::Logit;
  JacobiHyper hyper;
  Shapes shapes{};  // resolved at fit time
  Vector eta_hat;
  std::size_t n_train = 0;
};

/// Posterior mode of eta for a single response, given resolved shapes.
double latent_mode(Family family, double y, Shapes shapes);

/// Rejects responses that are not valid for the family (InvalidResponse,
/// naming the offending index).
void validate_response(const Vector& y, Family family);

/// Element-wise posterior modes; the schedule resolves with n = y.size()
/// unless `schedule_n` overrides it (shards use the global n).
Vector latent_vector(const Vector& y, Family family, const JacobiHyper& hyper,
                     std::size_t schedule_n = 0);

FittedGLM fit_jacobi(const Matrix& X, const Vector& y, Family family, const JacobiHyper& hyper);

/// Inverse link applied element-wise: logistic, Phi, or exp.
Vector inverse_link(Family family, const Vector& eta);

Vector predict_with(const Vector& beta, Family family, const Matrix& X0);

Vector predict(const FittedGLM& model, const Matrix& X0);

}  // namespace jacobi
