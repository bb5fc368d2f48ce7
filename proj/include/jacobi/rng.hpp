#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace jacobi {

/// Root of every random sequence in the library. (root_seed, stream_id)
/// determines the generated sequence completely.
struct SeedSpec {
  std::uint64_t root_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Counter-based generator: the i-th output is a bijective mix of (key, i),
/// so a stream can be derived for any task index without touching any other
/// stream's state. Output is identical on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

RandomStream derive_rng(const SeedSpec& seed, std::uint64_t task_index);

/// Two-level derivation for nested tasks (e.g. replication r, sub-task k).
RandomStream derive_rng(const SeedSpec& seed, std::uint64_t task_index, std::uint64_t sub_index);

// Samplers. All of them consume only the stream passed in, so results depend
// on nothing but the stream's key.

double standard_normal(RandomStream& rng);

/// log of a Gamma(shape, rate = 1) variate. Working on the log scale keeps
/// tiny shapes (a = 1/n) from underflowing to zero.
double log_gamma_variate(RandomStream& rng, double shape);

double gamma_variate(RandomStream& rng, double shape, double rate);

/// Beta variate returned as (log theta, log(1 - theta)).
struct LogBeta {
  double log_theta;
  double log_one_minus_theta;
};
LogBeta log_beta_variate(RandomStream& rng, double a, double b);

double beta_variate(RandomStream& rng, double a, double b);

std::uint64_t poisson_variate(RandomStream& rng, double mean);

/// Counts for `trials` draws from the categorical distribution `probs`.
std::vector<std::uint64_t> multinomial_variate(RandomStream& rng, std::uint64_t trials,
                                               std::span<const double> probs);

/// `count` distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(RandomStream& rng, std::size_t n,
                                                    std::size_t count);

}  // namespace jacobi
