#pragma once

// Binary entropy and the entropy rate f(x) = H(x)/x together with its inverse.
//
// All entropies are in bits. Every inequality in this library compares ratios
// of entropies, so the base only fixes the anchors H(1/2) = 1 and f(1/2) = 2.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ucentropy/errors.hpp"

namespace ucentropy {

/// Shared tolerance ladder. Scanners, tests and the CLI all read from here.
namespace tol {
inline constexpr double kernel = 1e-10;            // root residual of the inverse rate
inline constexpr double derivative = 1e-5;         // analytic vs finite-difference derivatives
inline constexpr double round_trip = 1e-9;         // |g(f(x)) - x|
inline constexpr double conservation = 1e-10;      // single merge: mean and entropy
inline constexpr double pipeline = 1e-8;           // multi-step reductions
inline constexpr double reduced_match = 1e-7;      // reduced distribution vs closed-form witness
inline constexpr double oracle = 1e-4;             // randomized brute-force comparisons
inline constexpr double closed_form = 1e-9;        // inequality margins evaluated in closed form
inline constexpr double finite_difference = 1e-6;  // monotonicity / convexity grids
inline constexpr double weight_sum = 1e-9;         // |sum of weights - 1| on construction
inline constexpr double zero_value = 1e-15;        // values below this merge into the zero atom
}  // namespace tol

/// (sqrt(5) - 1) / 2, the point where x^2 = 1 - x.
inline constexpr double golden_threshold = std::numbers::phi - 1.0;
/// (3 - sqrt(5)) / 2 = 1 - golden_threshold, the frequency bound for union-closed families.
inline constexpr double frequency_bound = 2.0 - std::numbers::phi;

/// A real number in [0, 1]. Construction rejects NaN and anything out of range.
class Prob {
 public:
  constexpr Prob(double value) : value_(check(value)) {}  // NOLINT: implicit by intent

  [[nodiscard]] constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }  // NOLINT

  /// 1 - value; exact whenever value >= 1/2.
  [[nodiscard]] constexpr Prob complement() const noexcept { return Prob(1.0 - value_, unchecked{}); }

 private:
  struct unchecked {};
  constexpr Prob(double value, unchecked) noexcept : value_(value) {}

  static constexpr double check(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw domain_error("probability outside [0,1]: " + std::to_string(v));
    return v;
  }

  double value_;
};

namespace detail {

inline constexpr double inv_ln2 = 1.0 / std::numbers::ln2;

// Unchecked H in bits. Evaluated on the pair (s, 1 - s) with s = min(x, 1 - x)
// so that H(x) and H(1 - x) take bit-identical paths whenever 1 - x is exact.
inline double entropy(double x) noexcept {
  const double s = x <= 0.5 ? x : 1.0 - x;
  if (s <= 0.0) return 0.0;
  return -(s * std::log(s) + (1.0 - s) * std::log1p(-s)) * inv_ln2;
}

// H(1 - eps) computed from eps directly, no cancellation near x = 1.
inline double entropy_of_complement(double eps) noexcept { return entropy(eps); }

// H(x^2) for x in [0,1]. For x >= 1/2 uses 1 - x^2 = e(2 - e) with e = 1 - x exact.
inline double entropy_of_square(double x) noexcept {
  if (x >= 0.5) {
    const double e = 1.0 - x;
    return entropy(e * (2.0 - e));
  }
  return entropy(x * x);
}

inline double rate(double x) noexcept { return entropy(x) / x; }

// Divided twice: x * x underflows for the tiny roots the inverse reaches.
inline double rate_derivative(double x) noexcept { return std::log1p(-x) / x * inv_ln2 / x; }

}  // namespace detail

/// Binary entropy in bits, H(0) = H(1) = 0.
inline double binary_entropy(Prob x) noexcept { return detail::entropy(x.value()); }

/// Entropy rate f(x) = H(x)/x on (0, 1]. Strictly decreasing, f(1) = 0, unbounded at 0.
inline double entropy_rate(Prob x) {
  if (x.value() == 0.0) throw domain_error("entropy rate is undefined at 0");
  return detail::rate(x.value());
}

/// f'(x) = log2(1 - x) / x^2 on the open interval (0, 1).
inline double entropy_rate_derivative(Prob x) {
  if (x.value() == 0.0 || x.value() == 1.0) throw domain_error("entropy rate derivative is singular at 0 and 1");
  return detail::rate_derivative(x.value());
}

/// Inverse of the entropy rate: the unique x in (0, 1] with f(x) = y.
///
/// Safeguarded Newton inside a shrinking bracket. The bracket starts at
/// [1e-15, 1]; when y exceeds f(1e-15) the lower end is pushed down until it
/// brackets or underflows. Bisection is geometric while the bracket spans more
/// than a factor of four, since f behaves like log2(1/x) near zero.
inline Prob inverse_entropy_rate(double y) {
  if (!(y >= 0.0) || std::isinf(y)) throw domain_error("inverse entropy rate needs a finite y >= 0");
  if (y == 0.0) return 1.0;

  double lo = 1e-15;
  double hi = 1.0;
  while (detail::rate(lo) < y) {
    if (lo == std::numeric_limits<double>::denorm_min()) {
      throw domain_error("inverse entropy rate underflows for y = " + std::to_string(y));
    }
    hi = lo;
    lo = std::max(lo * 1e-15, std::numeric_limits<double>::denorm_min());
  }

  double x = hi == 1.0 ? 0.5 : std::sqrt(lo) * std::sqrt(hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double residual = detail::rate(x) - y;
    if (residual == 0.0) break;
    if (residual > 0.0) {
      lo = x;
    } else {
      hi = x;
    }

    double next = x - residual / detail::rate_derivative(x);
    if (!(next > lo && next < hi)) next = hi > 4.0 * lo ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);

    const double step = std::abs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x) break;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return x;
}

/// A point on the graph of the entropy rate; doubles as a witness for the inverse.
struct EntropyRatePoint {
  Prob x;
  double y;

  static EntropyRatePoint at(Prob x) { return {x, entropy_rate(x)}; }
  static EntropyRatePoint from_rate(double y) { return {inverse_entropy_rate(y), y}; }

  /// y recomputes from x to within 1e-12 relative error.
  [[nodiscard]] bool consistent() const {
    if (x.value() == 0.0) return false;
    const double fx = detail::rate(x.value());
    return std::abs(fx - y) <= 1e-12 * std::max(1.0, std::abs(y));
  }
};

}  // namespace ucentropy
