#include "jacobi/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "jacobi/dmr.hpp"

namespace jacobi {

Matrix correlated_design(std::size_t n, std::size_t p, double sigma, double rho, RandomStream& rng) {
  Matrix cov(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      cov(i, j) = sigma * std::pow(rho, std::abs(static_cast<double>(i) - static_cast<double>(j)));
  const Matrix L = checked_cholesky(cov).matrixL();
  Matrix Z(n, p);
  // Row-major fill keeps the draw order independent of Eigen's storage order.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) Z(i, j) = standard_normal(rng);
  return Z * L.transpose();
}

GeneratedGLM gen_logistic(std::size_t n, const Vector& beta0, double sigma, double rho, RandomStream& rng) {
  GeneratedGLM g;
  g.beta0 = beta0;
  g.data.X = correlated_design(n, static_cast<std::size_t>(beta0.size()), sigma, rho, rng);
  const Vector eta = g.data.X * beta0;
  g.data.y.resize(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double prob = 1.0 / (1.0 + std::exp(-eta[i]));
    g.data.y[i] = rng.uniform() < prob ? 1.0 : 0.0;
  }
  return g;
}

GeneratedGLM gen_poisson(std::size_t n, const Vector& beta0, double sigma, double rho, RandomStream& rng) {
  GeneratedGLM g;
  g.beta0 = beta0;
  g.data.X = correlated_design(n, static_cast<std::size_t>(beta0.size()), sigma, rho, rng);
  const Vector rate = (g.data.X * beta0).array().exp().matrix();
  g.data.y.resize(rate.size());
  for (Eigen::Index i = 0; i < rate.size(); ++i) {
    if (!(rate[i] <= kMaxPoissonRate)) {
      throw Error(ErrorKind::RateOverflow, "poisson rate " + std::to_string(rate[i]) + " at row " +
                                               std::to_string(i) + " exceeds 1e6");
    }
    g.data.y[i] = static_cast<double>(poisson_variate(rng, rate[i]));
  }
  return g;
}

GeneratedDMR gen_dmr_data(std::size_t n, const Matrix& beta0, RandomStream& rng, double mean_total) {
  const Eigen::Index rows = beta0.rows();
  const Eigen::Index K = beta0.cols();
  const auto count = static_cast<Eigen::Index>(n);
  GeneratedDMR g;
  g.beta0 = beta0;
  g.data.X.resize(count, rows);
  for (Eigen::Index i = 0; i < count; ++i) {
    g.data.X(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < rows; ++j) g.data.X(i, j) = rng.uniform();
  }
  const Matrix probs = softmax_rows(g.data.X * g.beta0);
  CountTable table{Matrix::Zero(count, K)};
  g.totals.resize(count);
  g.data.y.resize(count);
  std::vector<double> row(static_cast<std::size_t>(K));
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto m = poisson_variate(rng, mean_total);
    for (Eigen::Index k = 0; k < K; ++k) row[static_cast<std::size_t>(k)] = probs(i, k);
    const auto draws = multinomial_variate(rng, m, row);
    for (Eigen::Index k = 0; k < K; ++k) table.counts(i, k) = static_cast<double>(draws[static_cast<std::size_t>(k)]);
    g.totals[i] = static_cast<double>(m);
  }
  const auto labels = argmax_rows(table.counts);
  for (Eigen::Index i = 0; i < count; ++i) g.data.y[i] = labels[static_cast<std::size_t>(i)];
  g.data.counts = std::move(table);
  return g;
}

GeneratedDMR gen_dmr(std::size_t n, std::size_t num_features, std::size_t num_classes, RandomStream& rng,
                     double mean_total) {
  if (num_classes < 2) throw Error(ErrorKind::ConfigError, "multinomial data needs K >= 2");
  const auto rows = static_cast<Eigen::Index>(num_features + 1);
  const auto K = static_cast<Eigen::Index>(num_classes);
  Matrix beta0(rows, K);
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double value = standard_normal(rng);
      beta0(j, k) = rng.uniform() < 0.5 ? 0.0 : value;
    }
  }
  return gen_dmr_data(n, beta0, rng, mean_total);
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

Dataset gen_sinc(std::size_t n, double noise_sd, RandomStream& rng) {
  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(n), 1);
  d.y.resize(static_cast<Eigen::Index>(n));
  d.feature_names = {"x"};
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    const double x = rng.uniform(-15.0, 15.0);
    const double z = sinc(x) + noise_sd * standard_normal(rng);
    d.X(i, 0) = x;
    d.y[i] = z > 0.0 ? 1.0 : 0.0;
  }
  return d;
}

Dataset gen_circular(std::size_t n, RandomStream& rng) {
  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(n), 2);
  d.y.resize(static_cast<Eigen::Index>(n));
  d.feature_names = {"x1", "x2"};
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    const double r = rng.uniform(0.0, 2.0);
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    d.X(i, 0) = r * std::sin(theta);
    d.X(i, 1) = r * std::cos(theta);
    d.y[i] = r < 1.0 ? 1.0 : 0.0;
  }
  return d;
}

namespace {

std::size_t contamination_count(std::size_t n, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::ConfigError, "contamination fraction must lie in [0, 1]");
  }
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

Vector contaminate_flip(const Vector& y, double fraction, RandomStream& rng) {
  const auto n = static_cast<std::size_t>(y.size());
  Vector out = y;
  for (const std::size_t i : sample_without_replacement(rng, n, contamination_count(n, fraction))) {
    const auto idx = static_cast<Eigen::Index>(i);
    out[idx] = 1.0 - out[idx];
  }
  return out;
}

Vector contaminate_poisson(const Vector& y, double fraction, double lambda_c, RandomStream& rng) {
  const auto n = static_cast<std::size_t>(y.size());
  Vector out = y;
  for (const std::size_t i : sample_without_replacement(rng, n, contamination_count(n, fraction))) {
    out[static_cast<Eigen::Index>(i)] = static_cast<double>(poisson_variate(rng, lambda_c));
  }
  return out;
}

double surrogate_rmse(const Vector& y, const Vector& p_hat) {
  if (y.size() != p_hat.size() || y.size() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "surrogate_rmse: length mismatch");
  }
  return std::sqrt((y - p_hat).squaredNorm() / static_cast<double>(y.size()));
}

double beta_rmse(const Eigen::Ref<const Matrix>& beta_hat, const Eigen::Ref<const Matrix>& beta0) {
  if (beta_hat.rows() != beta0.rows() || beta_hat.cols() != beta0.cols() || beta0.size() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "beta_rmse: shape mismatch");
  }
  return std::sqrt((beta_hat - beta0).squaredNorm() / static_cast<double>(beta0.size()));
}

double beta_rmse_euclidean(const Eigen::Ref<const Matrix>& beta_hat, const Eigen::Ref<const Matrix>& beta0) {
  if (beta_hat.rows() != beta0.rows() || beta_hat.cols() != beta0.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "beta_rmse_euclidean: shape mismatch");
  }
  return (beta_hat - beta0).norm();
}

double proportion_rmse(const CountTable& observed, const Matrix& probs) {
  if (observed.rows() != probs.rows() || observed.classes() != probs.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "proportion_rmse: shape mismatch");
  }
  double sum = 0.0;
  std::size_t cells = 0;
  const Vector totals = observed.totals();
  for (Eigen::Index i = 0; i < observed.rows(); ++i) {
    if (totals[i] <= 0.0) continue;
    for (Eigen::Index k = 0; k < observed.classes(); ++k) {
      const double diff = observed.counts(i, k) / totals[i] - probs(i, k);
      sum += diff * diff;
      ++cells;
    }
  }
  if (cells == 0) throw Error(ErrorKind::InsufficientData, "proportion_rmse: every row has m_i = 0");
  return std::sqrt(sum / static_cast<double>(cells));
}

double accuracy(const Vector& y, const Vector& p_hat, double threshold) {
  if (y.size() != p_hat.size() || y.size() == 0) throw Error(ErrorKind::DimensionMismatch, "accuracy: length mismatch");
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) hits += ((p_hat[i] > threshold) == (y[i] == 1.0)) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

double accuracy(const std::vector<int>& labels, const std::vector<int>& predicted) {
  if (labels.size() != predicted.size() || labels.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "accuracy: length mismatch");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += labels[i] == predicted[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double utility_total(const Vector& y_default, const Vector& approve, const Vector& V, const UtilitySpec& spec) {
  if (y_default.size() != approve.size() || y_default.size() != V.size()) {
    throw Error(ErrorKind::DimensionMismatch, "utility_total: length mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < V.size(); ++i) {
    if (V[i] < 0.0) throw Error(ErrorKind::InvalidResponse, "disbursement must be non-negative");
    const bool defaulted = y_default[i] == 1.0;
    const bool approved = approve[i] == 1.0;
    const double fraction = defaulted ? (approved ? spec.default_approve : spec.default_deny)
                                      : (approved ? spec.repaid_approve : spec.repaid_deny);
    total += fraction * V[i];
  }
  return total;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double bootstrap_median_se(const std::vector<double>& values, std::size_t B, RandomStream& rng) {
  if (values.size() < 2) throw Error(ErrorKind::InsufficientData, "bootstrap needs at least two values");
  if (B == 0) throw Error(ErrorKind::ConfigError, "bootstrap needs B >= 1");
  if (B == 1) return 0.0;
  std::vector<double> medians(B);
  std::vector<double> resample(values.size());
  for (std::size_t b = 0; b < B; ++b) {
    for (auto& v : resample) v = values[rng.below(values.size())];
    medians[b] = median(resample);
  }
  double mean = 0.0;
  for (double m : medians) mean += m;
  mean /= static_cast<double>(B);
  double ss = 0.0;
  for (double m : medians) ss += (m - mean) * (m - mean);
  return std::sqrt(ss / static_cast<double>(B - 1));
}

double bootstrap_median_se(const std::vector<double>& values, std::size_t B, const SeedSpec& seed) {
  RandomStream rng = derive_rng(seed, 0);
  return bootstrap_median_se(values, B, rng);
}

}  // namespace jacobi
