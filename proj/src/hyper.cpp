#include "jacobi/hyper.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "jacobi/parallel.hpp"
#include "jacobi/simlab.hpp"

namespace jacobi {

namespace {

void check_axis(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw Error(ErrorKind::ConfigError, std::string("grid axis ") + name + " is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorKind::InvalidHyper, std::string("grid axis ") + name + " must hold positive finite values");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw Error(ErrorKind::ConfigError, std::string("grid axis ") + name + " must be strictly ascending");
    }
  }
}

std::string format_score(const std::optional<double>& score) {
  if (!score) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", *score);
  return buf;
}

}  // namespace

void GridSpec::validate() const {
  check_axis(a_values, "a");
  check_axis(b_values, "b");
}

GridSpec GridSpec::linear(double lo, double hi, std::size_t count) {
  if (count == 0) throw Error(ErrorKind::ConfigError, "grid needs at least one point");
  GridSpec g;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    g.a_values.push_back(lo + t * (hi - lo));
  }
  g.b_values = g.a_values;
  return g;
}

GridReport::Cell GridReport::best() const {
  Cell cell{0, 0, std::numeric_limits<double>::infinity()};
  bool found = false;
  for (std::size_t i = 0; i < scores.size(); ++i)
    for (std::size_t j = 0; j < scores[i].size(); ++j)
      if (scores[i][j] && *scores[i][j] < cell.score) {
        cell = {i, j, *scores[i][j]};
        found = true;
      }
  if (!found) throw Error(ErrorKind::InsufficientData, "every grid cell failed");
  return cell;
}

std::size_t GridReport::missing() const {
  std::size_t count = 0;
  for (const auto& row : scores)
    for (const auto& s : row) count += s ? 0 : 1;
  return count;
}

std::string GridReport::to_csv() const {
  std::ostringstream out;
  out << "a,b,score\n";
  char buf[64];
  for (std::size_t i = 0; i < a_values.size(); ++i)
    for (std::size_t j = 0; j < b_values.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,", a_values[i], b_values[j]);
      out << buf << format_score(scores[i][j]) << '\n';
    }
  return out.str();
}

GridReport sensitivity_grid(const Dataset& train, const Dataset& test, Family family, const GridSpec& grid,
                            std::size_t threads) {
  grid.validate();
  validate_response(train.y, family);
  GridReport report;
  report.a_values = grid.a_values;
  report.b_values = grid.b_values;
  const std::size_t na = grid.a_values.size();
  const std::size_t nb = grid.b_values.size();
  report.scores.assign(na, std::vector<std::optional<double>>(nb));

  const LeastSquaresProjector projector(train.X);
  parallel_for(na * nb, threads, [&](std::size_t cell) {
    const std::size_t i = cell / nb;
    const std::size_t j = cell % nb;
    try {
      const JacobiHyper hyper{grid.a_values[i], grid.b_values[j], Schedule::Fixed};
      const Vector beta = projector.solve(latent_vector(train.y, family, hyper));
      report.scores[i][j] = surrogate_rmse(test.y, predict_with(beta, family, test.X));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidHyper && e.kind() != ErrorKind::ImproperPosterior) throw;
    }
  });
  return report;
}

Objective parse_objective(const std::string& name) {
  if (name == "rmse") return Objective::Rmse;
  if (name == "accuracy") return Objective::Accuracy;
  if (name == "utility") return Objective::Utility;
  throw Error(ErrorKind::ConfigError, "unknown objective '" + name + "' (expected rmse, accuracy or utility)");
}

double evaluate_objective(const FittedGLM& model, const Dataset& data, Objective objective) {
  const Vector p_hat = predict(model, data.X);
  switch (objective) {
    case Objective::Rmse:
      return surrogate_rmse(data.y, p_hat);
    case Objective::Accuracy:
      return -accuracy(data.y, p_hat);
    case Objective::Utility: {
      if (!data.disbursement) {
        throw Error(ErrorKind::MissingFeature, "utility objective needs a disbursement column");
      }
      // y = 1 marks a default; approve when the predicted default probability is below 1/2.
      const Vector approve = (p_hat.array() < 0.5).cast<double>();
      return -utility_total(data.y, approve, *data.disbursement);
    }
  }
  return 0.0;
}

std::vector<double> SearchResult::incumbent() const {
  std::vector<double> out;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : trace) {
    if (t.score && *t.score < best) best = *t.score;
    out.push_back(best);
  }
  return out;
}

std::string SearchResult::to_csv() const {
  std::ostringstream out;
  out << "a,b,score\n";
  char buf[64];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,", t.a, t.b);
    out << buf << format_score(t.score) << '\n';
  }
  return out.str();
}

SearchResult stochastic_search(const Dataset& train, const Dataset& validation, Family family,
                               std::size_t budget, const SeedSpec& seed, Objective objective,
                               std::size_t threads) {
  if (budget == 0) throw Error(ErrorKind::ConfigError, "search budget must be >= 1");
  validate_response(train.y, family);
  const LeastSquaresProjector projector(train.X);
  const double log_lo = std::log(kSearchLower);
  const double log_hi = std::log(kSearchUpper);

  SearchResult result;
  result.trace.resize(budget);
  parallel_for(budget, threads, [&](std::size_t i) {
    RandomStream rng = derive_rng(seed, i);
    SearchTrial& trial = result.trace[i];
    trial.a = std::exp(rng.uniform(log_lo, log_hi));
    trial.b = std::exp(rng.uniform(log_lo, log_hi));
    try {
      const JacobiHyper hyper{trial.a, trial.b, Schedule::Fixed};
      FittedGLM model;
      model.family = family;
      model.hyper = hyper;
      model.shapes = hyper.resolve(static_cast<std::size_t>(train.y.size()));
      model.eta_hat = latent_vector(train.y, family, hyper);
      model.beta = projector.solve(model.eta_hat);
      model.n_train = static_cast<std::size_t>(train.y.size());
      trial.score = evaluate_objective(model, validation, objective);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidHyper && e.kind() != ErrorKind::ImproperPosterior) throw;
    }
  });

  result.best_score = std::numeric_limits<double>::infinity();
  for (const auto& t : result.trace) {
    if (!t.score) {
      ++result.skipped;
    } else if (*t.score < result.best_score) {
      result.best_score = *t.score;
      result.best_a = t.a;
      result.best_b = t.b;
    }
  }
  if (result.skipped == budget) throw Error(ErrorKind::InsufficientData, "every search candidate was rejected");
  return result;
}

}  // namespace jacobi
