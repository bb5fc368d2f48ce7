#include "jacobi/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jacobi/normal.hpp"
#include "jacobi/parallel.hpp"

namespace jacobi {

double draw_latent(Family family, double y, Shapes s, RandomStream& rng) {
  switch (family) {
    case Family::Logit: {
      const LogBeta d = log_beta_variate(rng, y + s.a, 1.0 - y + s.b);
      return d.log_theta - d.log_one_minus_theta;
    }
    case Family::Probit: {
      const LogBeta d = log_beta_variate(rng, y + s.a, 1.0 - y + s.b);
      return normal_quantile_log(d.log_theta, d.log_one_minus_theta);
    }
    case Family::Poisson:
      return log_gamma_variate(rng, y + s.a) - std::log1p(s.b);
  }
  return 0.0;
}

double draw_natural(Family family, double y, Shapes s, RandomStream& rng) {
  if (family == Family::Poisson) return std::exp(draw_latent(family, y, s, rng));
  return std::exp(log_beta_variate(rng, y + s.a, 1.0 - y + s.b).log_theta);
}

Vector draw_latent_vector(const Vector& y, Family family, Shapes shapes, const SeedSpec& seed,
                          std::size_t replicate) {
  RandomStream rng = derive_rng(seed, replicate);
  Vector eta(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) eta[i] = draw_latent(family, y[i], shapes, rng);
  return eta;
}

BetaDraws sample_beta(const Matrix& X, const Vector& y, Family family, const JacobiHyper& hyper,
                      std::size_t num_draws, const SeedSpec& seed, std::size_t threads) {
  if (num_draws == 0) throw Error(ErrorKind::InsufficientDraws, "need at least one draw");
  if (X.rows() != y.size()) throw Error(ErrorKind::DimensionMismatch, "design and response lengths differ");
  validate_response(y, family);
  const Shapes shapes = hyper.resolve(static_cast<std::size_t>(y.size()));
  const LeastSquaresProjector projector(X);

  BetaDraws out{Matrix(static_cast<Eigen::Index>(num_draws), X.cols()), seed};
  parallel_for(num_draws, threads, [&](std::size_t r) {
    const Vector eta = draw_latent_vector(y, family, shapes, seed, r);
    out.draws.row(static_cast<Eigen::Index>(r)) = projector.solve(eta).transpose();
  });
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

CoefficientSummary summarize(const BetaDraws& draws, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::ConfigError, "interval level must lie in (0, 1)");
  }
  const Eigen::Index n = draws.draws.rows();
  if (n < 2) throw Error(ErrorKind::InsufficientDraws, "summaries need at least two draws");
  const Eigen::Index p = draws.draws.cols();
  CoefficientSummary s{Vector(p), Vector(p), Vector(p), Vector(p), level};
  const double tail = 0.5 * (1.0 - level);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto col = draws.draws.col(j);
    const double mean = col.mean();
    s.mean[j] = mean;
    s.sd[j] = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n - 1));
    std::copy(col.begin(), col.end(), column.begin());
    std::sort(column.begin(), column.end());
    s.lower[j] = quantile_sorted(column, tail);
    s.upper[j] = quantile_sorted(column, 1.0 - tail);
    if (column.front() == column.back()) {
      s.mean[j] = column.front();
      s.sd[j] = 0.0;
    }
  }
  return s;
}

}  // namespace jacobi
