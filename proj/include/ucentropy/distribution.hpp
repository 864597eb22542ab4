#pragma once

// Finite-support distributions on [0,1], the two-atom merge that conserves
// mean and expected entropy, the reduction to a single non-zero atom, and the
// closed-form minimum of the expected joint entropy E[H(X1 X2)].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ucentropy/errors.hpp"
#include "ucentropy/kernel.hpp"

namespace ucentropy {

struct Atom {
  double weight;
  double value;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Immutable list of (weight, value) atoms, sorted by value with equal values
/// coalesced and zero weights dropped. Weights must sum to 1 within 1e-9.
class FiniteDistribution {
 public:
  explicit FiniteDistribution(std::vector<Atom> atoms) : atoms_(normalize(std::move(atoms))) {}

  static FiniteDistribution point_mass(Prob value) { return FiniteDistribution({{1.0, value.value()}}); }

  [[nodiscard]] std::span<const Atom> atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
  [[nodiscard]] const Atom& operator[](std::size_t i) const noexcept { return atoms_[i]; }

  [[nodiscard]] double total_weight() const noexcept {
    return std::accumulate(atoms_.begin(), atoms_.end(), 0.0, [](double s, const Atom& a) { return s + a.weight; });
  }

  /// Weight carried by values below tol::zero_value.
  [[nodiscard]] double mass_at_zero() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_)
      if (a.value < tol::zero_value) m += a.weight;
    return m;
  }

  [[nodiscard]] std::size_t nonzero_support_size() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.value >= tol::zero_value; }));
  }

 private:
  static std::vector<Atom> normalize(std::vector<Atom> atoms) {
    std::vector<Atom> kept;
    kept.reserve(atoms.size());
    for (const auto& a : atoms) {
      if (!std::isfinite(a.weight) || a.weight < 0.0) throw domain_error("atom weight must be finite and >= 0");
      static_cast<void>(Prob{a.value});
      if (a.weight > 0.0) kept.push_back(a);
    }
    if (kept.empty()) throw domain_error("distribution has no atom of positive weight");

    std::stable_sort(kept.begin(), kept.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> out;
    out.reserve(kept.size());
    for (const auto& a : kept) {
      if (!out.empty() && a.value - out.back().value <= tol::zero_value) {
        out.back().weight += a.weight;
      } else {
        out.push_back(a);
      }
    }

    double sum = 0.0;
    for (const auto& a : out) sum += a.weight;
    if (std::abs(sum - 1.0) > tol::weight_sum) {
      throw domain_error("weights sum to " + std::to_string(sum) + ", expected 1");
    }
    return out;
  }

  std::vector<Atom> atoms_;
};

/// E[X].
inline double mean(const FiniteDistribution& d) noexcept {
  double s = 0.0;
  for (const auto& a : d.atoms()) s += a.weight * a.value;
  return std::min(s, 1.0);
}

/// E[H(X)]. Bounded by H(E[X]) since H is concave.
inline double expected_entropy(const FiniteDistribution& d) noexcept {
  double s = 0.0;
  for (const auto& a : d.atoms()) s += a.weight * detail::entropy(a.value);
  return s;
}

/// E[H(X1 X2)] for independent X1, X2 ~ d: the sum over all ordered atom pairs.
inline double expected_joint_entropy(const FiniteDistribution& d) noexcept {
  const auto atoms = d.atoms();
  double s = 0.0;
  for (const auto& a : atoms)
    for (const auto& b : atoms) s += a.weight * b.weight * detail::entropy(a.value * b.value);
  return s;
}

/// Two atoms (p1, x1), (p2, x2) replaced by (q, y) plus residual mass at zero.
struct MergeResult {
  double q;
  double y;
  double residual_at_zero;
};

/// Merge two non-zero atoms into one that carries the same mean p1 x1 + p2 x2
/// and the same entropy p1 H(x1) + p2 H(x2). The new value y solves
/// f(y) = (p1 H(x1) + p2 H(x2)) / (p1 x1 + p2 x2) and lies between x1 and x2;
/// concavity of H gives q <= p1 + p2.
inline MergeResult merge(double p1, Prob x1, double p2, Prob x2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
    throw domain_error("merge weights must be positive");
  }
  if (x1.value() == 0.0 || x2.value() == 0.0) throw domain_error("merge values must be non-zero");

  const double mass = p1 * x1 + p2 * x2;
  double y;
  if (x1.value() == x2.value()) {
    y = x1;
  } else {
    const double entropy = p1 * detail::entropy(x1) + p2 * detail::entropy(x2);
    y = inverse_entropy_rate(entropy / mass);
    y = std::clamp(y, std::min<double>(x1, x2), std::max<double>(x1, x2));
  }
  const double q = mass / y;
  return {q, y, std::max(0.0, (p1 + p2) - q)};
}

/// p1 H(z x1) + p2 H(z x2) - q H(z y), which the merge keeps non-negative for z in [0,1].
inline double scaled_entropy_margin(double p1, Prob x1, double p2, Prob x2, Prob z) {
  const auto m = merge(p1, x1, p2, x2);
  return p1 * detail::entropy(z * x1) + p2 * detail::entropy(z * x2) - m.q * detail::entropy(z * m.y);
}

/// Pair contribution to E[H(X1 X2)] before the merge minus after it:
/// p1^2 H(x1^2) + 2 p1 p2 H(x1 x2) + p2^2 H(x2^2) - q^2 H(y^2).
/// Cross terms against the residual zero atom vanish because H(0) = 0.
inline double pair_joint_entropy_margin(double p1, Prob x1, double p2, Prob x2) {
  const auto m = merge(p1, x1, p2, x2);
  const double before = p1 * p1 * detail::entropy(x1 * x1) + 2.0 * p1 * p2 * detail::entropy(x1 * x2) +
                        p2 * p2 * detail::entropy(x2 * x2);
  return before - m.q * m.q * detail::entropy(m.y * m.y);
}

enum class MergeOrder {
  smallest_first,  ///< merge the two smallest non-zero values
  largest_first,   ///< merge the two largest non-zero values
};

struct ReductionTrace {
  std::vector<FiniteDistribution> stages;  ///< stages.front() is the input, stages.back() the result
  std::vector<MergeResult> merges;         ///< merges[i] turns stages[i] into stages[i + 1]

  [[nodiscard]] const FiniteDistribution& result() const { return stages.back(); }
};

namespace detail {

inline FiniteDistribution assemble(double zero_mass, const std::vector<Atom>& nonzero) {
  std::vector<Atom> atoms;
  atoms.reserve(nonzero.size() + 1);
  atoms.push_back({zero_mass, 0.0});
  atoms.insert(atoms.end(), nonzero.begin(), nonzero.end());
  return FiniteDistribution(std::move(atoms));
}

}  // namespace detail

/// Merge non-zero atoms pairwise until at most one remains, recording every stage.
/// Mean and expected entropy are conserved at each step; E[H(X1 X2)] never increases.
inline ReductionTrace reduce_traced(const FiniteDistribution& d, MergeOrder order = MergeOrder::smallest_first) {
  ReductionTrace trace;
  trace.stages.push_back(d);

  double zero_mass = 0.0;
  std::vector<Atom> nonzero;
  for (const auto& a : d.atoms()) {
    if (a.value < tol::zero_value) {
      zero_mass += a.weight;
    } else {
      nonzero.push_back(a);
    }
  }
  const double total = d.total_weight();

  while (nonzero.size() > 1) {
    const std::size_t i = order == MergeOrder::smallest_first ? 0 : nonzero.size() - 2;
    const Atom a = nonzero[i];
    const Atom b = nonzero[i + 1];
    const auto m = merge(a.weight, a.value, b.weight, b.value);
    trace.merges.push_back(m);

    nonzero.erase(nonzero.begin() + static_cast<std::ptrdiff_t>(i), nonzero.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    auto pos = std::lower_bound(nonzero.begin(), nonzero.end(), m.y,
                                [](const Atom& x, double v) { return x.value < v; });
    if (pos != nonzero.end() && pos->value - m.y <= tol::zero_value) {
      pos->weight += m.q;
    } else if (pos != nonzero.begin() && m.y - std::prev(pos)->value <= tol::zero_value) {
      std::prev(pos)->weight += m.q;
    } else {
      nonzero.insert(pos, {m.q, m.y});
    }

    double nonzero_mass = 0.0;
    for (const auto& x : nonzero) nonzero_mass += x.weight;
    zero_mass = std::max(0.0, total - nonzero_mass);
    trace.stages.push_back(detail::assemble(zero_mass, nonzero));
  }
  return trace;
}

/// Reduce to a distribution with at most one non-zero value (plus mass at zero).
inline FiniteDistribution reduce(const FiniteDistribution& d, MergeOrder order = MergeOrder::smallest_first) {
  return reduce_traced(d, order).result();
}

/// Closed-form minimum of E[H(X1 X2)] subject to E[X] = t and E[H(X)] = u.
struct OptimumCertificate {
  double t;
  double u;
  double v;        ///< g(u / t); t <= v, equality exactly when u = H(t)
  double optimum;  ///< t^2 H(v^2) / v^2
  FiniteDistribution witness;  ///< v with weight t/v, 0 with weight 1 - t/v
};

/// Builds the minimizer for (t, u). Requires 0 < t < 1 and 0 < u <= H(t);
/// u may exceed H(t) by 1e-12 relative to absorb rounding in the caller.
inline OptimumCertificate optimum_certificate(double t, double u) {
  if (!(t > 0.0 && t < 1.0)) throw feasibility_error("target mean must lie in (0,1)");
  const double ht = detail::entropy(t);
  if (!(u > 0.0)) throw feasibility_error("target entropy must be positive");
  if (u > ht * (1.0 + 1e-12)) {
    throw feasibility_error("target entropy " + std::to_string(u) + " exceeds H(t) = " + std::to_string(ht));
  }

  double v = inverse_entropy_rate(u / t);
  if (v < t || t / v > 1.0 - 1e-12) v = t;
  const double vv = detail::entropy_of_square(v);
  const double optimum = t * t * vv / (v * v);

  const double w = v == t ? 1.0 : t / v;
  std::vector<Atom> atoms{{w, v}};
  if (w < 1.0) atoms.push_back({1.0 - w, 0.0});
  return {t, u, v, optimum, FiniteDistribution(std::move(atoms))};
}

}  // namespace ucentropy
