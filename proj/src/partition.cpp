#include "jacobi/partition.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "jacobi/parallel.hpp"

namespace jacobi {

PartialStats shard_stats(const Matrix& X_m, const Vector& y_m, Family family, const JacobiHyper& hyper,
                         std::size_t global_n, std::uint64_t shard_id) {
  if (X_m.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "shard " + std::to_string(shard_id) + " is empty");
  if (X_m.rows() != y_m.size()) {
    throw Error(ErrorKind::DimensionMismatch, "shard " + std::to_string(shard_id) + ": design and response differ");
  }
  require_finite(X_m, "shard design");
  const Vector eta = latent_vector(y_m, family, hyper, global_n);
  PartialStats s;
  s.shard_id = shard_id;
  s.n_shard = static_cast<std::uint64_t>(X_m.rows());
  s.xtx = X_m.transpose() * X_m;
  s.xteta = X_m.transpose() * eta;
  return s;
}

Vector aggregate_and_solve(std::vector<PartialStats> stats) {
  if (stats.empty()) throw Error(ErrorKind::InsufficientData, "no shard statistics to aggregate");
  std::sort(stats.begin(), stats.end(),
            [](const PartialStats& l, const PartialStats& r) { return l.shard_id < r.shard_id; });
  const Eigen::Index p = stats.front().p();
  Matrix xtx = Matrix::Zero(p, p);
  Vector xteta = Vector::Zero(p);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    if (s.p() != p || s.xtx.rows() != p || s.xtx.cols() != p) {
      throw Error(ErrorKind::SchemaMismatch, "shard " + std::to_string(s.shard_id) + " has p=" +
                                                 std::to_string(s.p()) + ", expected " + std::to_string(p));
    }
    if (i > 0 && stats[i - 1].shard_id == s.shard_id) {
      throw Error(ErrorKind::DuplicateShard, "shard " + std::to_string(s.shard_id) + " appears twice");
    }
    xtx += s.xtx;
    xteta += s.xteta;
  }
  return solve_gram(xtx, xteta);
}

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::uint64_t get(int width) {
    if (remaining() < static_cast<std::size_t>(width)) {
      throw Error(ErrorKind::SchemaMismatch, "shard frame truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_frame(const PartialStats& stats) {
  const auto p = static_cast<std::uint32_t>(stats.p());
  Writer w;
  const std::uint32_t payload = 4 + 8 + 8 + 4 + 8u * (p * p + p);
  w.u32(payload);
  w.u32(kShardSchemaVersion);
  w.u64(stats.shard_id);
  w.u64(stats.n_shard);
  w.u32(p);
  for (Eigen::Index i = 0; i < stats.xtx.rows(); ++i)
    for (Eigen::Index j = 0; j < stats.xtx.cols(); ++j) w.f64(stats.xtx(i, j));
  for (Eigen::Index j = 0; j < stats.xteta.size(); ++j) w.f64(stats.xteta[j]);
  return std::move(w.bytes());
}

PartialStats decode_frame(std::span<const std::uint8_t> frame) {
  Reader r(frame);
  const std::uint32_t payload = r.u32();
  if (payload != r.remaining()) throw Error(ErrorKind::SchemaMismatch, "shard frame length prefix mismatch");
  const std::uint32_t version = r.u32();
  if (version != kShardSchemaVersion) {
    throw Error(ErrorKind::SchemaMismatch, "unsupported shard schema version " + std::to_string(version));
  }
  PartialStats s;
  s.shard_id = r.u64();
  s.n_shard = r.u64();
  const std::uint32_t p = r.u32();
  if (r.remaining() != 8u * (static_cast<std::size_t>(p) * p + p)) {
    throw Error(ErrorKind::SchemaMismatch, "shard frame payload size disagrees with p");
  }
  s.xtx.resize(p, p);
  for (std::uint32_t i = 0; i < p; ++i)
    for (std::uint32_t j = 0; j < p; ++j) s.xtx(i, j) = r.f64();
  s.xteta.resize(p);
  for (std::uint32_t j = 0; j < p; ++j) s.xteta[j] = r.f64();
  if (s.n_shard == 0) throw Error(ErrorKind::SchemaMismatch, "shard frame reports zero rows");
  return s;
}

std::string to_debug_json(const PartialStats& stats) {
  nlohmann::json j;
  j["schema_version"] = kShardSchemaVersion;
  j["shard_id"] = stats.shard_id;
  j["n_shard"] = stats.n_shard;
  j["p"] = stats.p();
  std::vector<double> xtx;
  for (Eigen::Index i = 0; i < stats.xtx.rows(); ++i)
    for (Eigen::Index c = 0; c < stats.xtx.cols(); ++c) xtx.push_back(stats.xtx(i, c));
  j["xtx"] = xtx;
  j["xteta"] = std::vector<double>(stats.xteta.begin(), stats.xteta.end());
  return j.dump();
}

PartialStats from_debug_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema_version").get<std::uint32_t>() != kShardSchemaVersion) {
      throw Error(ErrorKind::SchemaMismatch, "unsupported shard schema version");
    }
    PartialStats s;
    s.shard_id = j.at("shard_id").get<std::uint64_t>();
    s.n_shard = j.at("n_shard").get<std::uint64_t>();
    const auto p = j.at("p").get<Eigen::Index>();
    const auto xtx = j.at("xtx").get<std::vector<double>>();
    const auto xteta = j.at("xteta").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(xtx.size()) != p * p || static_cast<Eigen::Index>(xteta.size()) != p) {
      throw Error(ErrorKind::SchemaMismatch, "shard JSON arrays disagree with p");
    }
    s.xtx.resize(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index c = 0; c < p; ++c) s.xtx(i, c) = xtx[static_cast<std::size_t>(i * p + c)];
    s.xteta = Eigen::Map<const Vector>(xteta.data(), p);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("shard JSON: ") + e.what());
  }
}

bool Coordinator::accept(std::span<const std::uint8_t> frame) { return accept(decode_frame(frame)); }

bool Coordinator::accept(PartialStats stats) {
  if (!shards_.empty() && shards_.begin()->second.p() != stats.p()) {
    throw Error(ErrorKind::SchemaMismatch, "shard " + std::to_string(stats.shard_id) + " has inconsistent p");
  }
  if (shards_.contains(stats.shard_id)) {
    ++duplicates_;
    return false;
  }
  const auto id = stats.shard_id;
  shards_.emplace(id, std::move(stats));
  return true;
}

std::uint64_t Coordinator::total_rows() const {
  std::uint64_t n = 0;
  for (const auto& [id, s] : shards_) n += s.n_shard;
  return n;
}

std::vector<PartialStats> Coordinator::partials() const {
  std::vector<PartialStats> out;
  out.reserve(shards_.size());
  for (const auto& [id, s] : shards_) out.push_back(s);
  return out;
}

Vector Coordinator::solve() const { return aggregate_and_solve(partials()); }

std::vector<std::pair<std::size_t, std::size_t>> contiguous_split(std::size_t n, std::size_t num_shards) {
  if (num_shards == 0 || num_shards > n) {
    throw Error(ErrorKind::ConfigError, "shard count must satisfy 1 <= M <= n");
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const std::size_t base = n / num_shards;
  const std::size_t extra = n % num_shards;
  std::size_t begin = 0;
  for (std::size_t m = 0; m < num_shards; ++m) {
    const std::size_t len = base + (m < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

namespace {

// Unbounded MPSC queue of encoded frames.
class FrameChannel {
 public:
  void send(std::vector<std::uint8_t> frame) {
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(std::move(frame));
    }
    ready_.notify_one();
  }
  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_all();
  }
  bool receive(std::vector<std::uint8_t>& out) {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return closed_ || !queue_.empty(); });
    if (queue_.empty()) return false;
    out = std::move(queue_.front());
    queue_.pop_front();
    return true;
  }

 private:
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<std::vector<std::uint8_t>> queue_;
  bool closed_ = false;
};

}  // namespace

HarnessResult run_harness(const Matrix& X, const Vector& y, std::size_t num_shards, Family family,
                          const JacobiHyper& hyper, const SeedSpec& seed, const HarnessOptions& options) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (static_cast<std::size_t>(y.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "design and response lengths differ");
  }
  const auto ranges = contiguous_split(n, num_shards);

  // Seeded start order, so arrival order at the coordinator varies.
  std::vector<std::size_t> order(num_shards);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream shuffle = derive_rng(seed, 0);
  for (std::size_t i = num_shards; i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

  std::vector<ShardTiming> timings(num_shards);
  FrameChannel channel;
  Coordinator coordinator;
  std::exception_ptr coordinator_error;
  std::thread consumer([&] {
    std::vector<std::uint8_t> frame;
    while (channel.receive(frame)) {
      try {
        coordinator.accept(frame);
      } catch (...) {
        if (!coordinator_error) coordinator_error = std::current_exception();
      }
    }
  });

  try {
    parallel_for(num_shards, options.threads, [&](std::size_t slot) {
      const std::size_t m = order[slot];
      const auto [begin, end] = ranges[m];
      const auto rows = static_cast<Eigen::Index>(end - begin);
      const auto start = std::chrono::steady_clock::now();
      PartialStats stats;
      try {
        stats = shard_stats(X.middleRows(static_cast<Eigen::Index>(begin), rows),
                            y.segment(static_cast<Eigen::Index>(begin), rows), family, hyper, n, m);
      } catch (const Error& e) {
        throw Error(e.kind(), "shard " + std::to_string(m) + ": " + e.what());
      }
      auto frame = encode_frame(stats);
      const auto stop = std::chrono::steady_clock::now();
      timings[m] = {m, static_cast<std::uint64_t>(rows),
                    std::chrono::duration<double, std::micro>(stop - start).count()};
      for (std::size_t r = 0; r < options.redeliveries; ++r) channel.send(frame);
      channel.send(std::move(frame));
    });
  } catch (...) {
    channel.close();
    consumer.join();
    throw;
  }
  channel.close();
  consumer.join();
  if (coordinator_error) std::rethrow_exception(coordinator_error);

  HarnessResult result;
  result.beta = coordinator.solve();
  result.timings = std::move(timings);
  result.partials = coordinator.partials();
  result.duplicates_rejected = coordinator.duplicates();
  return result;
}

}  // namespace jacobi
