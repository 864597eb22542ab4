#pragma once

// Scan configuration, scan reports, and the chunked min-reduction every
// scanner uses. A scan is a sequence of indexed points, each with a margin
// (left-hand side minus right-hand side of the inequality under test); the
// report keeps the smallest margin and the point that attains it. Ties go to
// the lowest index, so the merged result does not depend on how points were
// split across workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ucentropy/errors.hpp"
#include "ucentropy/kernel.hpp"

namespace ucentropy {

namespace defaults {
inline constexpr std::uint64_t seed = 42;
inline constexpr double grid_step = 1e-4;
inline constexpr std::uint64_t samples = 100000;
inline constexpr std::uint64_t verify_lemma_samples = 1000000;
}  // namespace defaults

struct ScanConfig {
  double grid_step = defaults::grid_step;
  std::uint64_t random_samples = defaults::samples;
  std::uint64_t seed = defaults::seed;
  double tolerance = tol::finite_difference;
  double range_lo = 0.0;
  double range_hi = 1.0;
  unsigned workers = 1;

  void validate() const {
    if (!(grid_step > 0.0)) throw precondition_error("grid_step must be positive");
    if (!(range_lo < range_hi)) throw precondition_error("range_lo must be below range_hi");
    if (!(tolerance > 0.0)) throw precondition_error("tolerance must be positive");
    if (workers == 0) throw precondition_error("workers must be at least 1");
  }

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct ScanReport {
  std::string name;
  std::uint64_t points_checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  bool passed = false;
  ScanConfig config;
  std::map<std::string, double> extras;  ///< scan-specific values (endpoint evaluations, parameters)

  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

namespace detail {

/// Running minimum of (margin, index) with its witness tuple.
struct MinTracker {
  double margin = std::numeric_limits<double>::infinity();
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
  std::vector<double> witness;
  std::uint64_t count = 0;

  // NaN counts as the worst possible margin.
  template <class WitnessFn>
  void offer(double m, std::uint64_t idx, WitnessFn&& make_witness) {
    ++count;
    if (std::isnan(m)) m = -std::numeric_limits<double>::infinity();
    if (m < margin || (m == margin && idx < index)) {
      margin = m;
      index = idx;
      witness = make_witness();
    }
  }

  void absorb(const MinTracker& other) {
    count += other.count;
    if (other.margin < margin || (other.margin == margin && other.index < index)) {
      margin = other.margin;
      index = other.index;
      witness = other.witness;
    }
  }
};

/// Runs fn(chunk) for chunk in [0, chunks) on up to `workers` threads and
/// folds the per-chunk trackers in chunk order.
template <class ChunkFn>
MinTracker parallel_min(std::uint64_t chunks, unsigned workers, ChunkFn fn) {
  std::vector<MinTracker> partial(chunks);
  if (workers <= 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) partial[c] = fn(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    const auto n = std::min<std::uint64_t>(workers, chunks);
    pool.reserve(n);
    for (std::uint64_t w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (auto c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) partial[c] = fn(c);
      });
    }
  }
  MinTracker total;
  for (const auto& p : partial) total.absorb(p);
  return total;
}

/// Points lo + k * step for k = 0..n with the last point clamped to hi; hi is
/// appended when the step does not land on it.
class Grid {
 public:
  Grid(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step) {
    const auto n = static_cast<std::uint64_t>(std::floor((hi - lo) / step + 1e-9));
    count_ = n + 1;
    if (lo + static_cast<double>(n) * step < hi - 1e-9 * step) ++count_;
  }

  [[nodiscard]] std::uint64_t size() const noexcept { return count_; }

  [[nodiscard]] double operator[](std::uint64_t k) const noexcept {
    if (k + 1 == count_) return hi_;
    return std::min(hi_, lo_ + static_cast<double>(k) * step_);
  }

 private:
  double lo_;
  double hi_;
  double step_;
  std::uint64_t count_;
};

inline constexpr std::uint64_t chunk_points = 4096;

inline std::uint64_t chunk_count(std::uint64_t points) { return (points + chunk_points - 1) / chunk_points; }

}  // namespace detail

using Rng = std::mt19937_64;

/// Independent generator for sub-stream `stream` of `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace detail {

inline ScanReport finish(std::string name, const ScanConfig& cfg, const MinTracker& t) {
  ScanReport r;
  r.name = std::move(name);
  r.points_checked = t.count;
  r.min_margin = t.margin;
  r.witness = t.witness;
  r.passed = t.count > 0 && r.min_margin >= -cfg.tolerance;
  r.config = cfg;
  return r;
}

}  // namespace detail

}  // namespace ucentropy
