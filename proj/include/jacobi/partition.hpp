#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "jacobi/glm.hpp"
#include "jacobi/rng.hpp"

namespace jacobi {

/// Shard-local sufficient statistics X_m'X_m and X_m' eta_m.
struct PartialStats {
  std::uint64_t shard_id = 0;
  std::uint64_t n_shard = 0;
  Matrix xtx;
  Vector xteta;

  Eigen::Index p() const { return xteta.size(); }
};

/// `global_n` is the full-dataset size broadcast by the coordinator; it only
/// matters for the one-over-n schedule.
PartialStats shard_stats(const Matrix& X_m, const Vector& y_m, Family family, const JacobiHyper& hyper,
                         std::size_t global_n, std::uint64_t shard_id = 0);

/// Sums the statistics in ascending shard_id order and solves the pooled
/// system. Throws SchemaMismatch on inconsistent p, DuplicateShard on a
/// repeated id and RankDeficient on a singular pooled Gram matrix.
Vector aggregate_and_solve(std::vector<PartialStats> stats);

// Wire format (all integers and reals little-endian):
//   u32 payload length (bytes that follow)
//   u32 schema version
//   u64 shard_id
//   u64 n_shard
//   u32 p
//   f64[p*p] xtx, row-major
//   f64[p]   xteta
inline constexpr std::uint32_t kShardSchemaVersion = 1;

std::vector<std::uint8_t> encode_frame(const PartialStats& stats);
PartialStats decode_frame(std::span<const std::uint8_t> frame);

std::string to_debug_json(const PartialStats& stats);
PartialStats from_debug_json(const std::string& text);

/// Single-consumer aggregation point. Frames may arrive in any order; a
/// repeated shard_id is dropped so redelivery is idempotent.
class Coordinator {
 public:
  /// Returns false when the frame duplicates an already accepted shard.
  bool accept(std::span<const std::uint8_t> frame);
  bool accept(PartialStats stats);

  std::size_t accepted() const { return shards_.size(); }
  std::size_t duplicates() const { return duplicates_; }
  std::uint64_t total_rows() const;

  Vector solve() const;
  std::vector<PartialStats> partials() const;

 private:
  std::map<std::uint64_t, PartialStats> shards_;
  std::size_t duplicates_ = 0;
};

struct ShardTiming {
  std::uint64_t shard_id = 0;
  std::uint64_t rows = 0;
  double micros = 0.0;
};

struct HarnessOptions {
  std::size_t threads = 0;
  /// Deliver every frame this many extra times (exercises deduplication).
  std::size_t redeliveries = 0;
};

struct HarnessResult {
  Vector beta;
  std::vector<ShardTiming> timings;  // ascending shard_id
  std::vector<PartialStats> partials;
  std::size_t duplicates_rejected = 0;
};

/// Contiguous row split into M shards. Shards are computed concurrently,
/// encoded, and delivered to a Coordinator in completion order (start order
/// is shuffled by `seed`).
HarnessResult run_harness(const Matrix& X, const Vector& y, std::size_t num_shards, Family family,
                          const JacobiHyper& hyper, const SeedSpec& seed, const HarnessOptions& options = {});

/// Row ranges [begin, end) of the contiguous split.
std::vector<std::pair<std::size_t, std::size_t>> contiguous_split(std::size_t n, std::size_t num_shards);

}  // namespace jacobi
