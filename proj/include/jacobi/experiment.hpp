#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jacobi/glm.hpp"
#include "jacobi/rng.hpp"

namespace jacobi {

enum class ExperimentKind { Logistic, Poisson, Multinomial };

enum class ContaminationKind { None, FlipLabels, PoissonReplace };

struct Contamination {
  ContaminationKind kind = ContaminationKind::None;
  double fraction = 0.0;
  double lambda = 20.0;
};

/// One simulation study: data-generating process, methods, replication count.
struct SimConfig {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::Logistic;
  std::size_t n = 100;
  std::size_t p = 8;           // logistic / poisson: length of beta0
  std::size_t replications = 500;
  Vector beta0;
  double sigma = 3.0;
  double rho_corr = 0.5;
  std::size_t num_classes = 4;   // multinomial
  std::size_t num_features = 3;  // multinomial, excluding the intercept
  double mean_total = 10.0;      // multinomial, m_i ~ Poisson(mean_total)
  Contamination contamination;
  std::optional<JacobiHyper> hyper;  // unset: family defaults
  std::vector<std::string> methods;  // empty: defaults for the kind
  std::size_t bootstrap = 1000;
  SeedSpec seed{20240611, 0};

  void validate() const;
  std::vector<std::string> effective_methods() const;

  /// Named configurations: exp1, exp3, exp4, exp6, exp7.
  static SimConfig preset(const std::string& name);
};

/// Parses a JSON document; errors name the offending JSON path.
SimConfig parse_sim_config(const std::string& json_text);
std::string sim_config_to_json(const SimConfig& config);

/// Per-replication metrics for one method. NaN marks a failed replication.
struct MethodSamples {
  std::string method;
  std::vector<double> rmse_y;            // in-sample: training responses vs fitted
  std::vector<double> rmse_y_holdout;    // fresh responses at a fresh design
  std::vector<double> rmse_y_decoupled;  // training responses vs predictions at the fresh design
  std::vector<double> rmse_beta;         // root-mean-square over coefficients
  std::vector<double> micros;            // wall time of the fit
  std::size_t failures = 0;
};

struct MetricSummary {
  double median = 0.0;
  double se = 0.0;
};

struct ReportRow {
  std::string method;
  std::size_t succeeded = 0;
  std::size_t failures = 0;
  MetricSummary rmse_y;
  MetricSummary rmse_y_holdout;
  MetricSummary rmse_y_decoupled;
  MetricSummary rmse_beta;
  double beta_rmse_sd = 0.0;
  double time_us = 0.0;
  double time_multiple = 1.0;  // against the first Jacobi row of the report
};

struct ExperimentReport {
  SimConfig config;
  std::vector<ReportRow> rows;
  std::vector<MethodSamples> samples;

  const ReportRow& row(const std::string& method) const;
};

/// Runs every replication (in parallel over derived streams), fits each
/// method, and summarizes with medians and bootstrap standard errors.
/// Metric columns depend only on the config; timing columns vary.
ExperimentReport run_experiment(const SimConfig& config, std::size_t threads = 1);

std::string report_to_csv(const ExperimentReport& report, bool include_timing = true);
std::string report_to_table(const ExperimentReport& report);

struct ConsistencyRow {
  std::size_t n = 0;
  std::string schedule;
  MetricSummary rmse_beta;
};

/// Median coefficient RMSE of the Jacobi logit fit across sample sizes, for
/// the fixed (a, b) = (1/2, 1/2) prior and the one-over-n schedule.
std::vector<ConsistencyRow> run_consistency(const SimConfig& base, const std::vector<std::size_t>& sizes,
                                            std::size_t threads = 1);

std::string consistency_to_csv(const std::vector<ConsistencyRow>& rows);

}  // namespace jacobi
