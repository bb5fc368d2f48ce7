#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jacobi/dataset.hpp"
#include "jacobi/glm.hpp"
#include "jacobi/rng.hpp"

namespace jacobi {

struct GridSpec {
  std::vector<double> a_values;  // ascending, positive
  std::vector<double> b_values;

  void validate() const;

  /// `count` points spaced evenly on [lo, hi] for both axes.
  static GridSpec linear(double lo, double hi, std::size_t count);
};

/// scores[i][j] is the test RMSE at (a_values[i], b_values[j]); a cell whose
/// fit failed is left empty.
struct GridReport {
  std::vector<double> a_values;
  std::vector<double> b_values;
  std::vector<std::vector<std::optional<double>>> scores;

  struct Cell {
    std::size_t i;
    std::size_t j;
    double score;
  };

  /// Lowest score; ties go to the first cell in row-major order.
  Cell best() const;
  std::size_t missing() const;
  std::string to_csv() const;
};

GridReport sensitivity_grid(const Dataset& train, const Dataset& test, Family family, const GridSpec& grid,
                            std::size_t threads = 1);

enum class Objective { Rmse, Accuracy, Utility };

Objective parse_objective(const std::string& name);

/// Lower is better: RMSE, negative accuracy, or negative total utility.
double evaluate_objective(const FittedGLM& model, const Dataset& data, Objective objective);

struct SearchTrial {
  double a;
  double b;
  std::optional<double> score;  // empty when the candidate was rejected
};

struct SearchResult {
  double best_a = 0.0;
  double best_b = 0.0;
  double best_score = 0.0;
  std::vector<SearchTrial> trace;
  std::size_t skipped = 0;

  /// Best score seen after each trial (infinite before the first success).
  std::vector<double> incumbent() const;
  std::string to_csv() const;
};

inline constexpr double kSearchLower = 1e-3;
inline constexpr double kSearchUpper = 2.0;

/// Random search over (a, b), log-uniform on [1e-3, 2]^2. Candidate i uses
/// derive_rng(seed, i), so traces are prefixes of longer runs.
SearchResult stochastic_search(const Dataset& train, const Dataset& validation, Family family,
                               std::size_t budget, const SeedSpec& seed, Objective objective = Objective::Rmse,
                               std::size_t threads = 1);

}  // namespace jacobi
