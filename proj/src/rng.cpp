#include "jacobi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t value) {
  return mix64(key ^ mix64(value + kGolden));
}

}  // namespace

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorKind::ConfigError, "RandomStream::below: bound must be positive");
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

RandomStream derive_rng(const SeedSpec& seed, std::uint64_t task_index) {
  const std::uint64_t base = combine(mix64(seed.root_seed), seed.stream_id);
  return RandomStream(combine(base, task_index));
}

RandomStream derive_rng(const SeedSpec& seed, std::uint64_t task_index, std::uint64_t sub_index) {
  return RandomStream(combine(derive_rng(seed, task_index).key(), sub_index ^ 0xA5A5A5A5ULL));
}

double standard_normal(RandomStream& rng) {
  // Marsaglia polar method; the second variate is discarded so that every
  // call consumes a self-contained block of the stream.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double log_gamma_variate(RandomStream& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(ErrorKind::InvalidHyper, "gamma shape must be positive");
  }
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a).
    const double boosted = log_gamma_variate(rng, shape + 1.0);
    return boosted + std::log(rng.uniform()) / shape;
  }
  // Marsaglia and Tsang (2000).
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
  }
}

double gamma_variate(RandomStream& rng, double shape, double rate) {
  if (!(rate > 0.0)) throw Error(ErrorKind::InvalidHyper, "gamma rate must be positive");
  return std::exp(log_gamma_variate(rng, shape)) / rate;
}

LogBeta log_beta_variate(RandomStream& rng, double a, double b) {
  const double ga = log_gamma_variate(rng, a);
  const double gb = log_gamma_variate(rng, b);
  const double hi = std::max(ga, gb);
  const double log_sum = hi + std::log(std::exp(ga - hi) + std::exp(gb - hi));
  return {ga - log_sum, gb - log_sum};
}

double beta_variate(RandomStream& rng, double a, double b) {
  return std::exp(log_beta_variate(rng, a, b).log_theta);
}

std::uint64_t poisson_variate(RandomStream& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw Error(ErrorKind::InvalidHyper, "poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Knuth multiplication.
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = rng.uniform();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform();
    }
    return k;
  }
  // Hormann (1993) transformed rejection with squeeze (PTRS).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::vector<std::uint64_t> multinomial_variate(RandomStream& rng, std::uint64_t trials,
                                               std::span<const double> probs) {
  std::vector<double> cumulative(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
  const double total = cumulative.empty() ? 0.0 : cumulative.back();
  std::vector<std::uint64_t> counts(probs.size(), 0);
  if (counts.empty()) return counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto idx = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
    ++counts[std::min(idx, counts.size() - 1)];
  }
  return counts;
}

std::vector<std::size_t> sample_without_replacement(RandomStream& rng, std::size_t n,
                                                    std::size_t count) {
  if (count > n) throw Error(ErrorKind::ConfigError, "sample_without_replacement: count exceeds n");
  // Partial Fisher-Yates.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace jacobi
