#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jacobi/dataset.hpp"
#include "jacobi/rng.hpp"

namespace jacobi {

/// Rows x_i ~ N(0, S) with S_ij = sigma * rho^|i-j|.
Matrix correlated_design(std::size_t n, std::size_t p, double sigma, double rho, RandomStream& rng);

struct GeneratedGLM {
  Dataset data;
  Vector beta0;
};

/// y_i ~ Bernoulli(logistic(x_i' beta0)).
GeneratedGLM gen_logistic(std::size_t n, const Vector& beta0, double sigma, double rho, RandomStream& rng);

/// y_i ~ Poisson(exp(x_i' beta0)). Throws RateOverflow if any rate > 1e6.
GeneratedGLM gen_poisson(std::size_t n, const Vector& beta0, double sigma, double rho, RandomStream& rng);

inline constexpr double kMaxPoissonRate = 1e6;

struct GeneratedDMR {
  Dataset data;  // X = [1, U(0,1)^P], data.counts set
  Matrix beta0;  // (P + 1) x K
  Vector totals;
};

/// Coefficients N(0,1), each zeroed with probability 1/2; m_i ~ Poisson(mean_total);
/// counts ~ Multinomial(m_i, softmax(x_i' beta0)).
GeneratedDMR gen_dmr(std::size_t n, std::size_t num_features, std::size_t num_classes, RandomStream& rng,
                     double mean_total = 10.0);

/// Data draw for fixed coefficients; gen_dmr draws beta0 and then calls this.
GeneratedDMR gen_dmr_data(std::size_t n, const Matrix& beta0, RandomStream& rng, double mean_total = 10.0);

/// x ~ U(-15, 15), z = sin(x)/x + N(0, noise_sd^2), y = 1{z > 0}. X is the single column x.
Dataset gen_sinc(std::size_t n, double noise_sd, RandomStream& rng);

/// r ~ U(0, 2), theta ~ U(-pi, pi), (x1, x2) = (r sin theta, r cos theta), y = 1{r < 1}.
Dataset gen_circular(std::size_t n, RandomStream& rng);

double sinc(double x);

/// Flips exactly round(fraction * n) distinct binary labels.
Vector contaminate_flip(const Vector& y, double fraction, RandomStream& rng);

/// Replaces exactly round(fraction * n) distinct entries with Poisson(lambda_c) draws.
Vector contaminate_poisson(const Vector& y, double fraction, double lambda_c, RandomStream& rng);

// Metrics.

/// sqrt(mean((y - p_hat)^2)).
double surrogate_rmse(const Vector& y, const Vector& p_hat);

/// Root-mean-square over coefficients: sqrt(mean((beta_hat - beta0)^2)).
double beta_rmse(const Eigen::Ref<const Matrix>& beta_hat, const Eigen::Ref<const Matrix>& beta0);

/// Euclidean norm ||beta_hat - beta0||.
double beta_rmse_euclidean(const Eigen::Ref<const Matrix>& beta_hat, const Eigen::Ref<const Matrix>& beta0);

/// RMSE between observed proportions Y_ik / m_i and predicted probabilities,
/// flattened over rows with m_i > 0.
double proportion_rmse(const CountTable& observed, const Matrix& probs);

double accuracy(const Vector& y, const Vector& p_hat, double threshold = 0.5);

double accuracy(const std::vector<int>& labels, const std::vector<int>& predicted);

/// Loan-decision payoff fractions applied to the gross disbursement V.
struct UtilitySpec {
  double default_deny = 0.1;
  double default_approve = -0.7;
  double repaid_deny = -0.1;
  double repaid_approve = 0.5;
};

/// Sum over loans of the payoff cell times V_i. y_default and approve are 0/1.
double utility_total(const Vector& y_default, const Vector& approve, const Vector& V,
                     const UtilitySpec& spec = {});

double median(std::vector<double> values);

/// SD of the medians of B bootstrap resamples (zero when B = 1).
double bootstrap_median_se(const std::vector<double>& values, std::size_t B, RandomStream& rng);
double bootstrap_median_se(const std::vector<double>& values, std::size_t B, const SeedSpec& seed);

}  // namespace jacobi
