#pragma once

// Grid and randomized scanners for the entropy inequalities behind the
// union-closed bound.
//
// Two of the monotonicity statements scanned here (H(x^2)/H(x) increasing on
// [0,1], and H(x^2)/(x H(x)) increasing on [(sqrt 5 - 1)/2, 1]) have no
// analytic proof in this library. A passing scan is numerical evidence on the
// scanned grid, not a proof.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ucentropy/distribution.hpp"
#include "ucentropy/kernel.hpp"
#include "ucentropy/report.hpp"
#include "ucentropy/sampling.hpp"

namespace ucentropy {

// ---------------------------------------------------------------------------
// Scanned functions

/// R(x) = H(x^2) / H(x), extended by R(0) = 0 and R(1) = 2.
inline double square_entropy_ratio(Prob x) noexcept {
  if (x.value() == 0.0) return 0.0;
  if (x.value() == 1.0) return 2.0;
  return detail::entropy_of_square(x) / detail::entropy(x);
}

/// S(x) = H(x^2) / (x H(x)) on (0,1], extended by S(1) = 2.
inline double scaled_square_entropy_ratio(Prob x) {
  if (x.value() == 0.0) throw domain_error("H(x^2)/(x H(x)) is undefined at 0");
  return square_entropy_ratio(x) / x;
}

/// f(alpha * g(x)) for alpha in (0,1] and x >= 0.
inline double rate_composition(double alpha, double x) {
  return detail::rate(alpha * inverse_entropy_rate(x).value());
}

/// Closed-form slope of x -> f(alpha g(x)): log(1 - alpha g(x)) / (alpha log(1 - g(x))).
inline double rate_composition_slope(double alpha, double x) {
  const double gx = inverse_entropy_rate(x);
  return std::log1p(-alpha * gx) / (alpha * std::log1p(-gx));
}

/// -(1 - z) ln(1 - z) / z in nats, with the limits 1 at z = 0 and 0 at z = 1.
inline double log_ratio(Prob z) noexcept {
  if (z.value() == 0.0) return 1.0;
  if (z.value() == 1.0) return 0.0;
  return -(1.0 - z) * std::log1p(-z) / z;
}

// ---------------------------------------------------------------------------
// Per-point margins. A report's witness fed back into these reproduces its min_margin.

inline double ratio_step_margin(double x0, double x1) { return square_entropy_ratio(x1) - square_entropy_ratio(x0); }

inline double scaled_ratio_step_margin(double x0, double x1) {
  return scaled_square_entropy_ratio(x1) - scaled_square_entropy_ratio(x0);
}

/// Second central difference of x -> f(alpha g(x)) at x with spacing h.
inline double convexity_margin(double alpha, double x, double h) {
  return rate_composition(alpha, x - h) - 2.0 * rate_composition(alpha, x) + rate_composition(alpha, x + h);
}

/// Decrease of the log ratio from z0 to z1, and the bound -z1 - ln(1 - z1) >= 0; the smaller of the two.
inline double log_ratio_step_margin(double z0, double z1) {
  const double decrease = log_ratio(z0) - log_ratio(z1);
  const double bound = z1 < 1.0 ? -z1 - std::log1p(-z1) : std::numeric_limits<double>::infinity();
  return std::min(decrease, bound);
}

// ---------------------------------------------------------------------------
// Grid scanners

namespace detail {

inline void require_open_unit_range(const ScanConfig& cfg) {
  cfg.validate();
  if (!(cfg.range_lo > 0.0 && cfg.range_hi < 1.0)) throw precondition_error("scan range must lie inside (0,1)");
}

template <class StepMargin>
ScanReport scan_consecutive(std::string name, const ScanConfig& cfg, StepMargin margin) {
  const Grid grid(cfg.range_lo, cfg.range_hi, cfg.grid_step);
  const std::uint64_t steps = grid.size() - 1;
  auto t = parallel_min(chunk_count(steps), cfg.workers, [&](std::uint64_t c) {
    MinTracker local;
    const auto end = std::min(steps, (c + 1) * chunk_points);
    for (auto k = c * chunk_points; k < end; ++k) {
      const double a = grid[k];
      const double b = grid[k + 1];
      local.offer(margin(a, b), k, [&] { return std::vector<double>{a, b}; });
    }
    return local;
  });
  return finish(std::move(name), cfg, t);
}

}  // namespace detail

/// Consecutive-point increase of H(x^2)/H(x); expected non-negative on all of (0,1).
inline ScanReport scan_ratio_monotone(const ScanConfig& cfg) {
  detail::require_open_unit_range(cfg);
  auto r = detail::scan_consecutive("turlough", cfg, ratio_step_margin);
  r.extras["value_at_lo"] = square_entropy_ratio(cfg.range_lo);
  r.extras["value_at_hi"] = square_entropy_ratio(cfg.range_hi);
  return r;
}

/// Consecutive-point increase of H(x^2)/(x H(x)). Expected to pass from the
/// golden threshold upward; ranges reaching below it are exploratory.
inline ScanReport scan_adric_monotone(const ScanConfig& cfg) {
  detail::require_open_unit_range(cfg);
  auto r = detail::scan_consecutive("adric", cfg, scaled_ratio_step_margin);
  r.extras["value_at_lo"] = scaled_square_entropy_ratio(cfg.range_lo);
  r.extras["value_at_hi"] = scaled_square_entropy_ratio(cfg.range_hi);
  return r;
}

/// Decrease of -(1-z) ln(1-z)/z together with ln(1-z) <= -z on the grid.
inline ScanReport scan_mercy_decreasing(const ScanConfig& cfg) {
  detail::require_open_unit_range(cfg);
  auto r = detail::scan_consecutive("mercy", cfg, log_ratio_step_margin);
  r.extras["value_at_lo"] = log_ratio(cfg.range_lo);
  r.extras["value_at_hi"] = log_ratio(cfg.range_hi);
  return r;
}

/// Largest x for which the convexity scan may evaluate f(alpha g(x)).
inline double convexity_scan_limit() { return detail::rate(1e-6); }

/// Second differences of x -> f(alpha g(x)) at every grid point x with x +- step
/// inside [range_lo, range_hi]. alpha = 1 is accepted: f(g(x)) = x.
inline ScanReport scan_peri_convexity(double alpha, const ScanConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw precondition_error("alpha must lie in (0,1]");
  if (!(cfg.range_lo > 0.0 && cfg.range_hi < convexity_scan_limit())) {
    throw precondition_error("convexity grid must lie inside (0, f(1e-6))");
  }
  const detail::Grid grid(cfg.range_lo, cfg.range_hi, cfg.grid_step);
  const double h = cfg.grid_step;
  const std::uint64_t n = grid.size();
  auto t = detail::parallel_min(detail::chunk_count(n), cfg.workers, [&](std::uint64_t c) {
    detail::MinTracker local;
    const auto end = std::min(n, (c + 1) * detail::chunk_points);
    for (auto k = c * detail::chunk_points; k < end; ++k) {
      const double x = grid[k];
      if (x - h < cfg.range_lo * (1.0 - 1e-12) || x + h > cfg.range_hi * (1.0 + 1e-12)) continue;
      local.offer(convexity_margin(alpha, x, h), k, [&] { return std::vector<double>{alpha, x, h}; });
    }
    return local;
  });
  auto r = detail::finish("peri", cfg, t);
  r.extras["alpha"] = alpha;
  return r;
}

// ---------------------------------------------------------------------------
// Main lemma, in the v-form and the rewritten w = 1 - v form

/// H(2a - a^2) / H(a).
inline double lemma_main_ratio(double alpha) {
  return detail::entropy(alpha * (2.0 - alpha)) / detail::entropy(alpha);
}

namespace detail {

inline double lemma_main_margin(const FiniteDistribution& d, double alpha) {
  double lhs = 0.0;
  for (const auto& a : d.atoms())
    for (const auto& b : d.atoms()) lhs += a.weight * b.weight * entropy(a.value + b.value - a.value * b.value);
  return lhs - lemma_main_ratio(alpha) * expected_entropy(d);
}

inline double lemma_main2_margin(const FiniteDistribution& d, double beta) {
  return expected_joint_entropy(d) - square_entropy_ratio(beta) * expected_entropy(d);
}

inline constexpr double constraint_slack = 1e-12;

}  // namespace detail

/// sum_ij p_i p_j H(v_i + v_j - v_i v_j) - H(2a - a^2)/H(a) sum_i p_i H(v_i),
/// for E[V] <= alpha and 0 < alpha <= (3 - sqrt 5)/2.
inline double check_lemma_main(const FiniteDistribution& d, double alpha) {
  if (!(alpha > 0.0 && alpha <= frequency_bound + detail::constraint_slack)) {
    throw precondition_error("alpha must lie in (0, (3 - sqrt 5)/2]");
  }
  if (mean(d) > alpha + detail::constraint_slack) throw precondition_error("mean exceeds alpha");
  return detail::lemma_main_margin(d, alpha);
}

/// sum_ij p_i p_j H(w_i w_j) - H(beta^2)/H(beta) sum_i p_i H(w_i),
/// for E[W] >= beta and (sqrt 5 - 1)/2 <= beta < 1.
inline double check_lemma_main2(const FiniteDistribution& d, double beta) {
  if (!(beta >= golden_threshold - detail::constraint_slack && beta < 1.0)) {
    throw precondition_error("beta must lie in [(sqrt 5 - 1)/2, 1)");
  }
  if (mean(d) < beta - detail::constraint_slack) throw precondition_error("mean is below beta");
  return detail::lemma_main2_margin(d, beta);
}

/// The lower-bound chain for the rewritten lemma, evaluated term by term:
///
///   lhs >= t^2 H(v^2)/v^2          (closed-form optimum, v = g(u/t))
///        = t u S(v)                (identity, S(x) = H(x^2)/(x H(x)))
///       >= t u S(t) = u R(t)       (S increasing, t <= v)
///       >= u R(beta) = rhs         (R increasing, beta <= t)
///
/// with t = E[W], u = E[H(W)], R(x) = H(x^2)/H(x).
struct ProofChain {
  double t;
  double u;
  double v;
  double lhs;
  double optimum_bound;  ///< t^2 H(v^2) / v^2
  double identity_form;  ///< t u S(v)
  double mean_bound;     ///< u R(t)
  double rhs;            ///< u R(beta)

  [[nodiscard]] double optimum_step() const { return lhs - optimum_bound; }
  [[nodiscard]] double identity_residual() const { return std::abs(optimum_bound - identity_form); }
  [[nodiscard]] double monotone_scaled_step() const { return identity_form - mean_bound; }
  [[nodiscard]] double monotone_ratio_step() const { return mean_bound - rhs; }
  [[nodiscard]] double margin() const { return lhs - rhs; }

  /// Every inequality step holds to within `tolerance` and the identity to within 1e-12 relative.
  [[nodiscard]] bool certified(double tolerance = tol::closed_form) const {
    return optimum_step() >= -tolerance && monotone_scaled_step() >= -tolerance &&
           monotone_ratio_step() >= -tolerance && identity_residual() <= 1e-12 * std::max(1.0, optimum_bound);
  }
};

namespace detail {

inline ProofChain lemma_main2_chain(const FiniteDistribution& d, double beta) {
  ProofChain c{};
  c.t = mean(d);
  c.u = expected_entropy(d);
  c.lhs = expected_joint_entropy(d);
  c.rhs = c.u * square_entropy_ratio(beta);
  if (c.u <= 0.0 || c.t <= 0.0) {
    c.v = 1.0;
    return c;
  }
  c.v = std::max<double>(inverse_entropy_rate(c.u / c.t), c.t);
  c.optimum_bound = c.t * c.t * entropy_of_square(c.v) / (c.v * c.v);
  c.identity_form = c.t * c.u * scaled_square_entropy_ratio(c.v);
  c.mean_bound = c.u * square_entropy_ratio(c.t);
  return c;
}

}  // namespace detail

inline ProofChain lemma_main2_chain(const FiniteDistribution& d, double beta) {
  check_lemma_main2(d, beta);
  return detail::lemma_main2_chain(d, beta);
}

// ---------------------------------------------------------------------------
// Randomized scans

namespace detail {

/// Draws `cfg.random_samples` accepted instances in chunks of chunk_points;
/// chunk c uses substream(seed, c). `draw` returns false to reject.
template <class Draw, class Margin>
MinTracker random_scan(const ScanConfig& cfg, Draw draw, Margin margin) {
  const std::uint64_t n = cfg.random_samples;
  return parallel_min(chunk_count(n), cfg.workers, [&](std::uint64_t c) {
    MinTracker local;
    Rng rng = substream(cfg.seed, c);
    const auto end = std::min(n, (c + 1) * chunk_points);
    for (auto k = c * chunk_points; k < end; ++k) {
      for (;;) {
        auto instance = draw(rng);
        if (!instance) continue;
        const auto& [param, d] = *instance;
        local.offer(margin(d, param), k, [&] {
          auto w = flatten(d);
          w.insert(w.begin(), param);
          return w;
        });
        break;
      }
    }
    return local;
  });
}

inline std::optional<std::pair<double, FiniteDistribution>> draw_lemma_main(Rng& rng) {
  auto d = random_distribution(rng);
  const double m = mean(d);
  if (m > frequency_bound) return std::nullopt;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool tight = unit(rng) < 0.5 && m > 0.0;
  double alpha = tight ? m : m + (frequency_bound - m) * unit(rng);
  if (alpha <= 0.0) alpha = frequency_bound * 0.5;
  return std::pair{alpha, std::move(d)};
}

inline std::optional<std::pair<double, FiniteDistribution>> draw_lemma_main2(Rng& rng) {
  auto d = random_distribution(rng);
  const double m = mean(d);
  if (m < golden_threshold) return std::nullopt;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool tight = unit(rng) < 0.5;
  double beta = tight ? m : golden_threshold + (m - golden_threshold) * unit(rng);
  beta = std::min(beta, std::nextafter(1.0, 0.0));
  return std::pair{beta, std::move(d)};
}

}  // namespace detail

/// Randomized check of the v-form lemma. Witness: [alpha, w1, v1, w2, v2, ...].
inline ScanReport scan_lemma_main(const ScanConfig& cfg) {
  cfg.validate();
  auto t = detail::random_scan(cfg, detail::draw_lemma_main, detail::lemma_main_margin);
  return detail::finish("main", cfg, t);
}

/// Randomized check of the w-form lemma, also certifying every step of the
/// lower-bound chain. Step minima are reported in extras.
/// Witness: [beta, w1, x1, w2, x2, ...].
inline ScanReport scan_lemma_main2(const ScanConfig& cfg) {
  cfg.validate();
  const std::uint64_t n = cfg.random_samples;
  struct StepMins {
    double optimum = std::numeric_limits<double>::infinity();
    double scaled = std::numeric_limits<double>::infinity();
    double ratio = std::numeric_limits<double>::infinity();
    double identity = 0.0;
  };
  std::vector<StepMins> steps(detail::chunk_count(n));
  auto t = detail::parallel_min(detail::chunk_count(n), cfg.workers, [&](std::uint64_t c) {
    detail::MinTracker local;
    StepMins& sm = steps[c];
    Rng rng = substream(cfg.seed, c);
    const auto end = std::min(n, (c + 1) * detail::chunk_points);
    for (auto k = c * detail::chunk_points; k < end; ++k) {
      auto instance = detail::draw_lemma_main2(rng);
      while (!instance) instance = detail::draw_lemma_main2(rng);
      const auto& [beta, d] = *instance;
      const auto chain = detail::lemma_main2_chain(d, beta);
      sm.optimum = std::min(sm.optimum, chain.optimum_step());
      sm.scaled = std::min(sm.scaled, chain.monotone_scaled_step());
      sm.ratio = std::min(sm.ratio, chain.monotone_ratio_step());
      sm.identity = std::max(sm.identity, chain.identity_residual());
      local.offer(detail::lemma_main2_margin(d, beta), k, [&] {
        auto w = flatten(d);
        w.insert(w.begin(), beta);
        return w;
      });
    }
    return local;
  });
  auto r = detail::finish("main2", cfg, t);
  StepMins all;
  for (const auto& s : steps) {
    all.optimum = std::min(all.optimum, s.optimum);
    all.scaled = std::min(all.scaled, s.scaled);
    all.ratio = std::min(all.ratio, s.ratio);
    all.identity = std::max(all.identity, s.identity);
  }
  r.extras["chain_min_optimum_step"] = all.optimum;
  r.extras["chain_min_scaled_ratio_step"] = all.scaled;
  r.extras["chain_min_ratio_step"] = all.ratio;
  r.extras["chain_max_identity_residual"] = all.identity;
  return r;
}

// ---------------------------------------------------------------------------
// Threshold exploration below and above the golden threshold

struct ThresholdRow {
  double beta;
  double random_min;          ///< over random distributions with mean >= beta
  std::uint64_t random_points;
  double family_min;          ///< over the two-point family {v w.p. beta/v, 0 otherwise}, v in [beta, 1]
  double family_argmin_v;
  [[nodiscard]] double min_margin() const { return std::min(random_min, family_min); }
};

struct ThresholdReport {
  std::vector<ThresholdRow> rows;
  ScanReport summary;  ///< name "threshold"; witness [beta, w1, x1, ...]
};

/// For each beta on [beta_lo, beta_hi] with spacing beta_step, the smallest
/// rewritten-lemma margin found. No pass/fail contract: below the golden
/// threshold the lemma is not claimed and negative margins are informative.
inline ThresholdReport threshold_exploration(double beta_lo, double beta_hi, double beta_step, const ScanConfig& cfg) {
  cfg.validate();
  if (!(beta_lo > 0.0 && beta_hi < 1.0 && beta_lo <= beta_hi && beta_step > 0.0)) {
    throw precondition_error("beta range must satisfy 0 < lo <= hi < 1 with a positive step");
  }
  std::vector<double> betas;
  if (beta_lo == beta_hi) {
    betas.push_back(beta_lo);
  } else {
    const detail::Grid grid(beta_lo, beta_hi, beta_step);
    for (std::uint64_t k = 0; k < grid.size(); ++k) betas.push_back(grid[k]);
  }
  const std::uint64_t nb = betas.size();
  std::vector<ThresholdRow> rows(nb);

  auto t = detail::parallel_min(nb, cfg.workers, [&](std::uint64_t b) {
    detail::MinTracker random_part;
    detail::MinTracker family_part;
    const double beta = betas[b];
    const double ratio = square_entropy_ratio(beta);
    auto margin = [&](const FiniteDistribution& d) {
      return expected_joint_entropy(d) - ratio * expected_entropy(d);
    };
    auto witness_of = [&](const FiniteDistribution& d) {
      auto w = flatten(d);
      w.insert(w.begin(), beta);
      return w;
    };

    Rng rng = substream(cfg.seed, b);
    const std::uint64_t max_draws = 1000 * std::max<std::uint64_t>(cfg.random_samples, 1);
    std::uint64_t accepted = 0;
    for (std::uint64_t draw = 0; accepted < cfg.random_samples && draw < max_draws; ++draw) {
      auto d = random_distribution(rng);
      if (mean(d) < beta) continue;
      random_part.offer(margin(d), accepted, [&] { return witness_of(d); });
      ++accepted;
    }

    const detail::Grid vs(beta, 1.0, cfg.grid_step);
    for (std::uint64_t k = 0; k < vs.size(); ++k) {
      const double v = vs[k];
      const double w = std::min(1.0, beta / v);
      std::vector<Atom> atoms{{w, v}};
      if (w < 1.0) atoms.push_back({1.0 - w, 0.0});
      const FiniteDistribution d(std::move(atoms));
      family_part.offer(margin(d), cfg.random_samples + k, [&] { return witness_of(d); });
    }

    // The family witness is [beta, ..., w, v] with v the largest atom.
    rows[b] = {beta, random_part.margin, random_part.count, family_part.margin,
               family_part.witness.empty() ? beta : family_part.witness.back()};
    detail::MinTracker both = random_part;
    both.absorb(family_part);
    both.index = b;
    return both;
  });
  auto summary = detail::finish("threshold", cfg, t);
  summary.extras["beta_lo"] = beta_lo;
  summary.extras["beta_hi"] = beta_hi;
  summary.extras["beta_step"] = beta_step;
  return {std::move(rows), std::move(summary)};
}

// ---------------------------------------------------------------------------

/// Re-evaluates a report's witness through the scanned expression.
inline double replay(const ScanReport& r) {
  const auto& w = r.witness;
  if (r.name == "turlough") return ratio_step_margin(w.at(0), w.at(1));
  if (r.name == "adric") return scaled_ratio_step_margin(w.at(0), w.at(1));
  if (r.name == "mercy") return log_ratio_step_margin(w.at(0), w.at(1));
  if (r.name == "peri") return convexity_margin(w.at(0), w.at(1), w.at(2));
  if (r.name == "main") return detail::lemma_main_margin(unflatten(w, 1), w.at(0));
  if (r.name == "main2" || r.name == "threshold") return detail::lemma_main2_margin(unflatten(w, 1), w.at(0));
  throw precondition_error("no replay rule for report `" + r.name + "`");
}

}  // namespace ucentropy
