#pragma once

// Union-closed families over small ground sets [n] = {1..n}, subsets stored as
// bitmasks with element i in bit i-1. Exhaustive enumeration of union-closed
// families for n <= 4, element frequencies decided in exact integer
// arithmetic, and the entropy comparison H(A u B) against H(A) for
// independent A, B.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <optional>
#include <thread>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ucentropy/errors.hpp"
#include "ucentropy/kernel.hpp"
#include "ucentropy/report.hpp"
#include "ucentropy/sampling.hpp"

namespace ucentropy {

using Mask = std::uint32_t;

inline constexpr int max_ground_size = 16;
inline constexpr int max_enumeration_ground_size = 4;

namespace detail {

inline void require_ground(int n, int limit = max_ground_size) {
  if (n < 0 || n > limit) {
    throw precondition_error("ground set size " + std::to_string(n) + " outside [0, " + std::to_string(limit) + "]");
  }
}

}  // namespace detail

/// Sorted, deduplicated subsets of [ground_n].
class SetFamily {
 public:
  SetFamily(int ground_n, std::vector<Mask> members) : ground_n_(ground_n), members_(std::move(members)) {
    detail::require_ground(ground_n);
    for (Mask m : members_)
      if (m >> ground_n != 0) throw domain_error("subset mask outside the ground set");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  [[nodiscard]] int ground_n() const noexcept { return ground_n_; }
  [[nodiscard]] std::span<const Mask> members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool empty() const noexcept { return members_.empty(); }

  [[nodiscard]] bool contains(Mask m) const { return std::binary_search(members_.begin(), members_.end(), m); }

  /// The family {empty set}: union-closed, but every element has frequency 0.
  [[nodiscard]] bool is_empty_set_only() const noexcept { return members_.size() == 1 && members_[0] == 0; }

  /// First pair (a, b) of members whose union is missing, if any.
  [[nodiscard]] std::optional<std::pair<Mask, Mask>> union_violation() const {
    std::vector<bool> present(std::size_t{1} << ground_n_, false);
    for (Mask m : members_) present[m] = true;
    for (std::size_t i = 0; i < members_.size(); ++i)
      for (std::size_t j = i + 1; j < members_.size(); ++j)
        if (!present[members_[i] | members_[j]]) return std::pair{members_[i], members_[j]};
    return std::nullopt;
  }

  [[nodiscard]] bool union_closed() const { return !union_violation(); }

  friend bool operator==(const SetFamily&, const SetFamily&) = default;

 private:
  int ground_n_;
  std::vector<Mask> members_;
};

/// Power set of [n].
inline SetFamily power_set(int n) {
  detail::require_ground(n);
  std::vector<Mask> all(std::size_t{1} << n);
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = static_cast<Mask>(m);
  return SetFamily(n, std::move(all));
}

/// Smallest union-closed family containing `members`.
inline SetFamily union_closure(int ground_n, std::span<const Mask> members) {
  detail::require_ground(ground_n);
  std::vector<bool> present(std::size_t{1} << ground_n, false);
  std::vector<Mask> closed;
  for (Mask m : members) {
    if (m >> ground_n != 0) throw domain_error("subset mask outside the ground set");
    if (!present[m]) {
      present[m] = true;
      closed.push_back(m);
    }
  }
  // Every newly appended set is paired with all earlier ones when the outer index reaches it.
  for (std::size_t i = 0; i < closed.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Mask u = closed[i] | closed[j];
      if (!present[u]) {
        present[u] = true;
        closed.push_back(u);
      }
    }
  }
  return SetFamily(ground_n, std::move(closed));
}

inline SetFamily union_closure(const SetFamily& f) { return union_closure(f.ground_n(), f.members()); }

struct FrequencyProfile {
  std::vector<std::uint64_t> counts;  ///< number of members containing element i + 1
  std::uint64_t family_size = 0;
  std::vector<double> frequency;
  double max_frequency = 0.0;
  std::uint64_t max_count = 0;
  int argmax_element = 0;  ///< 1-based; smallest element on ties, 0 when the ground set is empty
};

inline FrequencyProfile frequency_profile(const SetFamily& f) {
  if (f.empty()) throw precondition_error("frequency profile of an empty family");
  FrequencyProfile p;
  p.family_size = f.size();
  p.counts.assign(static_cast<std::size_t>(f.ground_n()), 0);
  for (Mask m : f.members())
    for (int i = 0; i < f.ground_n(); ++i)
      if (m >> i & 1U) ++p.counts[static_cast<std::size_t>(i)];
  p.frequency.resize(p.counts.size());
  for (std::size_t i = 0; i < p.counts.size(); ++i) {
    p.frequency[i] = static_cast<double>(p.counts[i]) / static_cast<double>(p.family_size);
    if (i == 0 || p.counts[i] > p.max_count) {
      p.max_count = p.counts[i];
      p.argmax_element = static_cast<int>(i) + 1;
    }
  }
  p.max_frequency = static_cast<double>(p.max_count) / static_cast<double>(p.family_size);
  return p;
}

/// count / size >= (3 - sqrt 5)/2, decided exactly: with r = 3 size - 2 count
/// the condition is r <= 0 or 5 size^2 >= r^2. size <= 2^16, so 64 bits suffice.
inline bool meets_frequency_bound(std::uint64_t count, std::uint64_t size) {
  if (2 * count >= 3 * size) return true;
  const std::uint64_t r = 3 * size - 2 * count;
  return 5 * size * size >= r * r;
}

/// count / size >= 1/2, the conjectured bound.
inline bool meets_half_bound(std::uint64_t count, std::uint64_t size) { return 2 * count >= size; }

namespace detail {

inline void require_theorem2_input(const SetFamily& f) {
  if (f.empty()) throw precondition_error("family is empty");
  if (auto bad = f.union_violation()) throw not_union_closed(bad->first, bad->second);
  if (f.is_empty_set_only()) throw precondition_error("the family {empty set} is excluded");
}

}  // namespace detail

/// max element frequency - (3 - sqrt 5)/2 for a union-closed family other than {empty set}.
inline double check_theorem2(const SetFamily& f) {
  detail::require_theorem2_input(f);
  return frequency_profile(f).max_frequency - frequency_bound;
}

// ---------------------------------------------------------------------------
// Distributions over subsets

struct SubsetAtom {
  double probability;
  Mask mask;

  friend bool operator==(const SubsetAtom&, const SubsetAtom&) = default;
};

/// Probabilities over distinct subsets of [ground_n], sorted by mask.
class SubsetDistribution {
 public:
  SubsetDistribution(int ground_n, std::vector<SubsetAtom> atoms) : ground_n_(ground_n), atoms_(std::move(atoms)) {
    detail::require_ground(ground_n);
    std::erase_if(atoms_, [](const SubsetAtom& a) { return a.probability == 0.0; });
    double sum = 0.0;
    for (const auto& a : atoms_) {
      if (!(a.probability > 0.0) || !std::isfinite(a.probability)) throw domain_error("subset probability must be > 0");
      if (a.mask >> ground_n != 0) throw domain_error("subset mask outside the ground set");
      sum += a.probability;
    }
    if (atoms_.empty() || std::abs(sum - 1.0) > tol::weight_sum) throw domain_error("subset probabilities must sum to 1");
    std::sort(atoms_.begin(), atoms_.end(), [](const SubsetAtom& a, const SubsetAtom& b) { return a.mask < b.mask; });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
      if (atoms_[i].mask == atoms_[i - 1].mask) throw domain_error("duplicate subset in distribution");
  }

  [[nodiscard]] int ground_n() const noexcept { return ground_n_; }
  [[nodiscard]] std::span<const SubsetAtom> atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }

 private:
  int ground_n_;
  std::vector<SubsetAtom> atoms_;
};

inline SubsetDistribution uniform_on(const SetFamily& f) {
  if (f.empty()) throw precondition_error("uniform distribution on an empty family");
  std::vector<SubsetAtom> atoms;
  const double p = 1.0 / static_cast<double>(f.size());
  for (Mask m : f.members()) atoms.push_back({p, m});
  return SubsetDistribution(f.ground_n(), std::move(atoms));
}

/// Independent coordinates: element i + 1 is present with probability marginals[i].
inline SubsetDistribution product_distribution(std::span<const double> marginals) {
  const int n = static_cast<int>(marginals.size());
  detail::require_ground(n);
  std::vector<SubsetAtom> atoms;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= (m >> i & 1U) ? marginals[static_cast<std::size_t>(i)] : 1.0 - marginals[static_cast<std::size_t>(i)];
    if (p > 0.0) atoms.push_back({p, m});
  }
  return SubsetDistribution(n, std::move(atoms));
}

/// Shannon entropy -sum p log2 p of the subset distribution.
inline double entropy_of(const SubsetDistribution& d) noexcept {
  double h = 0.0;
  for (const auto& a : d.atoms()) h -= a.probability * std::log2(a.probability);
  return h;
}

/// Pr[i in A] for each element.
inline std::vector<double> marginals(const SubsetDistribution& d) {
  std::vector<double> m(static_cast<std::size_t>(d.ground_n()), 0.0);
  for (const auto& a : d.atoms())
    for (int i = 0; i < d.ground_n(); ++i)
      if (a.mask >> i & 1U) m[static_cast<std::size_t>(i)] += a.probability;
  return m;
}

/// Exact law of A u B for independent A, B ~ d.
inline SubsetDistribution union_distribution(const SubsetDistribution& d) {
  std::vector<double> acc(std::size_t{1} << d.ground_n(), 0.0);
  for (const auto& a : d.atoms())
    for (const auto& b : d.atoms()) acc[a.mask | b.mask] += a.probability * b.probability;
  std::vector<SubsetAtom> atoms;
  for (std::size_t m = 0; m < acc.size(); ++m)
    if (acc[m] > 0.0) atoms.push_back({acc[m], static_cast<Mask>(m)});
  return SubsetDistribution(d.ground_n(), std::move(atoms));
}

/// Which constant multiplies H(A) in the union-entropy bound.
enum class UnionBoundConstant {
  stated,  ///< H(a^2)/H(a)
  lemma,   ///< H(2a - a^2)/H(a), the constant the main lemma delivers; never smaller than `stated`
};

inline double union_bound_constant(double alpha, UnionBoundConstant which) {
  const double num = which == UnionBoundConstant::stated ? detail::entropy(alpha * alpha)
                                                         : detail::entropy(alpha * (2.0 - alpha));
  return num / detail::entropy(alpha);
}

namespace detail {

inline double theorem1_margin(const SubsetDistribution& d, double alpha, UnionBoundConstant which) {
  return entropy_of(union_distribution(d)) - union_bound_constant(alpha, which) * entropy_of(d);
}

}  // namespace detail

/// H(A u B) - c(alpha) H(A) for independent A, B ~ d with every Pr[i in A] <= alpha
/// and 0 < alpha <= (3 - sqrt 5)/2.
inline double check_theorem1(const SubsetDistribution& d, double alpha,
                             UnionBoundConstant which = UnionBoundConstant::stated) {
  if (!(alpha > 0.0 && alpha <= frequency_bound + 1e-12)) throw precondition_error("alpha must lie in (0, (3 - sqrt 5)/2]");
  for (double m : marginals(d))
    if (m > alpha + 1e-12) throw precondition_error("an element marginal exceeds alpha");
  return detail::theorem1_margin(d, alpha, which);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration for n <= 4

namespace detail {

// Candidate families are bit patterns over the 2^n subsets; bit m set means mask m is a member.
inline bool candidate_union_closed(std::uint64_t candidate, unsigned subsets) {
  for (unsigned a = 0; a < subsets; ++a) {
    if (!(candidate >> a & 1U)) continue;
    for (unsigned b = a + 1; b < subsets; ++b)
      if ((candidate >> b & 1U) && !(candidate >> (a | b) & 1U)) return false;
  }
  return true;
}

inline SetFamily family_from_candidate(int n, std::uint64_t candidate) {
  std::vector<Mask> members;
  for (unsigned m = 0; m < (1U << n); ++m)
    if (candidate >> m & 1U) members.push_back(m);
  return SetFamily(n, std::move(members));
}

}  // namespace detail

/// Calls fn(family) for every nonempty union-closed family over [n], in
/// ascending order of the candidate bit pattern. Returns the count.
template <class Fn>
std::uint64_t for_each_union_closed(int n, Fn&& fn) {
  detail::require_ground(n, max_enumeration_ground_size);
  const unsigned subsets = 1U << n;
  const std::uint64_t last = (std::uint64_t{1} << subsets) - 1;
  std::uint64_t count = 0;
  for (std::uint64_t c = 1; c <= last; ++c) {
    if (!detail::candidate_union_closed(c, subsets)) continue;
    ++count;
    fn(detail::family_from_candidate(n, c));
  }
  return count;
}

inline std::vector<SetFamily> enumerate_union_closed(int n) {
  std::vector<SetFamily> out;
  for_each_union_closed(n, [&](const SetFamily& f) { out.push_back(f); });
  return out;
}

struct CensusRow {
  std::uint64_t family_id;  ///< position in the canonical enumeration order
  std::uint64_t size;
  std::uint64_t max_count;  ///< max_frequency = max_count / size
  double margin;            ///< max_frequency - (3 - sqrt 5)/2
  bool meets_bound;         ///< exact integer decision
  bool meets_half;
};

struct Census {
  int ground_n = 0;
  std::uint64_t families = 0;  ///< every nonempty union-closed family, {empty set} included
  std::vector<CensusRow> rows; ///< one per family other than {empty set}
  std::uint64_t failures = 0;  ///< rows with meets_bound == false
  std::uint64_t half_failures = 0;
  std::optional<CensusRow> weakest;  ///< smallest max frequency (exact comparison), first on ties
};

/// Frequency-bound sweep over every union-closed family on [n]. The candidate space
/// is split by its top bits into `workers` interleaved shares; rows are merged
/// back in canonical order, so the census does not depend on the split.
inline Census theorem2_census(int n, unsigned workers = 1) {
  detail::require_ground(n, max_enumeration_ground_size);
  const unsigned subsets = 1U << n;
  const std::uint64_t total = std::uint64_t{1} << subsets;
  const std::uint64_t parts = std::min<std::uint64_t>(64, total);
  const std::uint64_t span = (total + parts - 1) / parts;

  struct Part {
    std::vector<std::pair<std::uint64_t, CensusRow>> rows;
    std::uint64_t families = 0;
  };
  std::vector<Part> partial(parts);
  auto run = [&](std::uint64_t p) {
    Part& out = partial[p];
    const auto begin = std::max<std::uint64_t>(1, p * span);
    const auto end = std::min(total, (p + 1) * span);
    for (std::uint64_t c = begin; c < end; ++c) {
      if (!detail::candidate_union_closed(c, subsets)) continue;
      ++out.families;
      if (c == 1) continue;  // {empty set}
      const auto prof = frequency_profile(detail::family_from_candidate(n, c));
      out.rows.push_back({c, CensusRow{0, prof.family_size, prof.max_count, prof.max_frequency - frequency_bound,
                                       meets_frequency_bound(prof.max_count, prof.family_size),
                                       meets_half_bound(prof.max_count, prof.family_size)}});
    }
  };
  if (workers <= 1) {
    for (std::uint64_t p = 0; p < parts; ++p) run(p);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t p = w; p < parts; p += workers) run(p);
      });
  }

  Census census;
  census.ground_n = n;
  std::uint64_t id = 0;
  for (const auto& part : partial) {
    census.families += part.families;
    for (auto [c, row] : part.rows) {
      row.family_id = id++;
      if (!row.meets_bound) ++census.failures;
      if (!row.meets_half) ++census.half_failures;
      // a/b < c/d  <=>  a d < c b
      if (!census.weakest || row.max_count * census.weakest->size < census.weakest->max_count * row.size) {
        census.weakest = row;
      }
      census.rows.push_back(row);
    }
  }
  return census;
}

// ---------------------------------------------------------------------------
// Samplers

/// k uniform on [1, 2^n], k distinct masks, then the union closure.
inline SetFamily random_union_closed_family(Rng& rng, int n) {
  detail::require_ground(n);
  const std::size_t universe = std::size_t{1} << n;
  std::uniform_int_distribution<std::size_t> count(1, universe);
  const auto k = count(rng);
  std::vector<Mask> all(universe);
  for (std::size_t m = 0; m < universe; ++m) all[m] = static_cast<Mask>(m);
  std::vector<Mask> picked;
  std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
  return union_closure(n, picked);
}

/// Random distribution over subsets of [n]: support size uniform on
/// [1, 2^n], each mask drawn with independent element inclusion probability
/// rho ~ U(0, 1/2), duplicates discarded, flat simplex weights.
inline SubsetDistribution random_subset_distribution(Rng& rng, int n) {
  detail::require_ground(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(1, std::size_t{1} << n);
  const auto k = count(rng);
  const double rho = 0.5 * unit(rng);
  std::vector<Mask> masks;
  for (std::size_t attempt = 0; attempt < 4 * k && masks.size() < k; ++attempt) {
    Mask m = 0;
    for (int i = 0; i < n; ++i)
      if (unit(rng) < rho) m |= Mask{1} << i;
    if (std::find(masks.begin(), masks.end(), m) == masks.end()) masks.push_back(m);
  }
  const auto w = flat_simplex(rng, masks.size());
  std::vector<SubsetAtom> atoms(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) atoms[i] = {w[i], masks[i]};
  return SubsetDistribution(n, std::move(atoms));
}

/// Randomized union-entropy check on ground sets of size 1..max_n with all
/// marginals <= alpha <= (3 - sqrt 5)/2. Witness: [alpha, n, p1, mask1, p2, mask2, ...].
inline ScanReport scan_theorem1(const ScanConfig& cfg, UnionBoundConstant which = UnionBoundConstant::stated,
                                int max_n = 4) {
  cfg.validate();
  detail::require_ground(max_n);
  const std::uint64_t n_samples = cfg.random_samples;
  auto t = detail::parallel_min(detail::chunk_count(n_samples), cfg.workers, [&](std::uint64_t c) {
    detail::MinTracker local;
    Rng rng = substream(cfg.seed, c);
    std::uniform_int_distribution<int> ground(1, max_n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto end = std::min(n_samples, (c + 1) * detail::chunk_points);
    for (auto k = c * detail::chunk_points; k < end; ++k) {
      for (;;) {
        const int n = ground(rng);
        auto d = random_subset_distribution(rng, n);
        const auto m = marginals(d);
        const double top = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
        if (top > frequency_bound) continue;
        double alpha = (unit(rng) < 0.5 && top > 0.0) ? top : top + (frequency_bound - top) * unit(rng);
        if (alpha <= 0.0) alpha = 0.5 * frequency_bound;
        local.offer(detail::theorem1_margin(d, alpha, which), k, [&] {
          std::vector<double> w{alpha, static_cast<double>(n)};
          for (const auto& a : d.atoms()) {
            w.push_back(a.probability);
            w.push_back(static_cast<double>(a.mask));
          }
          return w;
        });
        break;
      }
    }
    return local;
  });
  auto r = detail::finish(which == UnionBoundConstant::stated ? "theorem1" : "theorem1_lemma_constant", cfg, t);
  return r;
}

/// Re-evaluates a theorem1 report's witness.
inline double replay_theorem1(const ScanReport& r) {
  const auto& w = r.witness;
  const int n = static_cast<int>(w.at(1));
  std::vector<SubsetAtom> atoms;
  for (std::size_t i = 2; i + 1 < w.size(); i += 2) atoms.push_back({w[i], static_cast<Mask>(w[i + 1])});
  const auto which = r.name == "theorem1" ? UnionBoundConstant::stated : UnionBoundConstant::lemma;
  return detail::theorem1_margin(SubsetDistribution(n, std::move(atoms)), w.at(0), which);
}

}  // namespace ucentropy
