#pragma once

// The full verification suite: kernel round trips, merge and reduction
// properties, the inequality scans, and the set-family checks. Every check
// yields a ScanReport; `verify-all` in the command-line tool runs this list.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ucentropy/distribution.hpp"
#include "ucentropy/inequality_lab.hpp"
#include "ucentropy/report.hpp"
#include "ucentropy/sampling.hpp"
#include "ucentropy/setfamily.hpp"

namespace ucentropy {

enum class SuiteModule { kernel, distribution, lab, setfamily };

inline const char* module_name(SuiteModule m) {
  switch (m) {
    case SuiteModule::kernel: return "kernel";
    case SuiteModule::distribution: return "distribution";
    case SuiteModule::lab: return "lab";
    case SuiteModule::setfamily: return "setfamily";
  }
  return "?";
}

struct SuiteOptions {
  std::uint64_t seed = defaults::seed;
  std::optional<double> tolerance;      ///< replaces every check's own tolerance
  std::optional<std::uint64_t> samples; ///< replaces every randomized sample count
  unsigned workers = 1;
};

struct SuiteCheck {
  SuiteModule module;
  std::string name;
  std::function<ScanReport(const SuiteOptions&)> run;
};

namespace suite {

inline constexpr std::uint64_t merge_samples = 100000;
inline constexpr std::uint64_t reduction_samples = 1000;
inline constexpr std::size_t reduction_max_atoms = 20;
inline constexpr std::uint64_t oracle_pairs = 100;
inline constexpr std::uint64_t oracle_draws = 200000;
inline constexpr std::uint64_t bridge_pairs = 10000;
inline constexpr double merge_weight_slack = 1e-12;
inline constexpr double entropy_bridge_slack = 1e-12;
inline constexpr double refine_width = 1e-2;  // endpoint bands scanned at step / 10
inline constexpr int census_max_n = 4;
inline constexpr int entropy_bridge_max_n = 3;
inline const std::vector<double> peri_alphas{0.1, 0.25, 0.5, 0.75, 0.9};

inline ScanConfig config(const SuiteOptions& o, double tolerance, std::uint64_t samples) {
  ScanConfig c;
  c.seed = o.seed;
  c.tolerance = o.tolerance.value_or(tolerance);
  c.random_samples = o.samples.value_or(samples);
  c.workers = o.workers;
  return c;
}

inline ScanConfig grid_config(const SuiteOptions& o, double tolerance, double lo, double hi, double step) {
  auto c = config(o, tolerance, 0);
  c.range_lo = lo;
  c.range_hi = hi;
  c.grid_step = step;
  return c;
}

// fn(rng, k, tracker) handles sample k; sub-stream per chunk keeps results split-independent.
template <class SampleFn>
ScanReport sampled(std::string name, const ScanConfig& cfg, SampleFn fn) {
  const auto n = cfg.random_samples;
  auto t = detail::parallel_min(detail::chunk_count(n), cfg.workers, [&](std::uint64_t c) {
    detail::MinTracker local;
    Rng rng = substream(cfg.seed, c);
    const auto end = std::min(n, (c + 1) * detail::chunk_points);
    for (auto k = c * detail::chunk_points; k < end; ++k) fn(rng, k, local);
    return local;
  });
  return detail::finish(std::move(name), cfg, t);
}

template <class PointFn>
ScanReport gridded(std::string name, const ScanConfig& cfg, PointFn fn) {
  const detail::Grid grid(cfg.range_lo, cfg.range_hi, cfg.grid_step);
  auto t = detail::parallel_min(detail::chunk_count(grid.size()), cfg.workers, [&](std::uint64_t c) {
    detail::MinTracker local;
    const auto end = std::min(grid.size(), (c + 1) * detail::chunk_points);
    for (auto k = c * detail::chunk_points; k < end; ++k) fn(grid[k], k, local);
    return local;
  });
  return detail::finish(std::move(name), cfg, t);
}

/// Worst of several reports under one name; points add up, config of the first.
inline ScanReport combine(const std::vector<ScanReport>& parts) {
  ScanReport out = parts.at(0);
  out.points_checked = 0;
  out.passed = true;
  out.extras.clear();
  for (const auto& p : parts) {
    out.points_checked += p.points_checked;
    out.passed = out.passed && p.passed;
    if (p.min_margin < out.min_margin) {
      out.min_margin = p.min_margin;
      out.witness = p.witness;
    }
  }
  return out;
}

/// Main grid plus the two endpoint bands at a ten times finer step.
template <class Scan>
ScanReport refined(Scan scan, ScanConfig cfg) {
  std::vector<ScanReport> parts{scan(cfg)};
  const double lo = cfg.range_lo, hi = cfg.range_hi, fine = cfg.grid_step / 10;
  auto band = cfg;
  band.grid_step = fine;
  band.range_hi = std::min(hi, lo + refine_width);
  parts.push_back(scan(band));
  band.range_lo = std::max(lo, hi - refine_width);
  band.range_hi = hi;
  parts.push_back(scan(band));
  auto r = combine(parts);
  r.config = cfg;
  r.extras = parts[0].extras;
  return r;
}

struct Quad {
  double p1, x1, p2, x2;
};

inline Quad draw_quad(Rng& rng) {
  std::uniform_real_distribution<double> w(1e-3, 1.0);
  std::uniform_real_distribution<double> x(1e-6, 1.0);
  return {w(rng), x(rng), w(rng), x(rng)};
}

// --- kernel ---------------------------------------------------------------

inline ScanReport kernel_round_trip(const SuiteOptions& o) {
  return gridded("kernel_round_trip", grid_config(o, tol::round_trip, 1e-3, 0.999, 1e-3),
                 [](double x, std::uint64_t k, detail::MinTracker& t) {
                   const double back = inverse_entropy_rate(entropy_rate(x));
                   t.offer(-std::abs(back - x), k, [&] { return std::vector<double>{x, back}; });
                 });
}

inline ScanReport kernel_inverse(const SuiteOptions& o) {
  return gridded("kernel_inverse", grid_config(o, tol::kernel, 0.0, 20.0, 1e-3),
                 [](double y, std::uint64_t k, detail::MinTracker& t) {
                   const double x = inverse_entropy_rate(y);
                   const double err = std::abs(detail::rate(x) - y) / std::max(1.0, y);
                   t.offer(-err, k, [&] { return std::vector<double>{y, x}; });
                 });
}

// --- distribution ---------------------------------------------------------

inline ScanReport merge_conservation(const SuiteOptions& o) {
  return sampled("merge_conservation", config(o, tol::conservation, merge_samples),
                 [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
                   const auto q = draw_quad(rng);
                   const auto m = merge(q.p1, q.x1, q.p2, q.x2);
                   const double mass = q.p1 * q.x1 + q.p2 * q.x2;
                   const double ent = q.p1 * detail::entropy(q.x1) + q.p2 * detail::entropy(q.x2);
                   const double err = std::max(std::abs(m.q * m.y - mass), std::abs(m.q * detail::entropy(m.y) - ent));
                   t.offer(-err, k, [&] { return std::vector<double>{q.p1, q.x1, q.p2, q.x2}; });
                 });
}

inline ScanReport merge_weight(const SuiteOptions& o) {
  return sampled("merge_weight", config(o, merge_weight_slack, merge_samples),
                 [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
                   const auto q = draw_quad(rng);
                   t.offer(q.p1 + q.p2 - merge(q.p1, q.x1, q.p2, q.x2).q, k,
                           [&] { return std::vector<double>{q.p1, q.x1, q.p2, q.x2}; });
                 });
}

inline ScanReport merge_scaled_entropy(const SuiteOptions& o) {
  return sampled("merge_scaled_entropy", config(o, tol::closed_form, merge_samples),
                 [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
                   const auto q = draw_quad(rng);
                   for (int i = 0; i <= 20; ++i) {
                     const double z = i / 20.0;
                     t.offer(scaled_entropy_margin(q.p1, q.x1, q.p2, q.x2, z), k,
                             [&] { return std::vector<double>{q.p1, q.x1, q.p2, q.x2, z}; });
                   }
                 });
}

inline ScanReport merge_pair_joint(const SuiteOptions& o) {
  return sampled("merge_pair_joint", config(o, tol::closed_form, merge_samples),
                 [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
                   const auto q = draw_quad(rng);
                   t.offer(pair_joint_entropy_margin(q.p1, q.x1, q.p2, q.x2), k,
                           [&] { return std::vector<double>{q.p1, q.x1, q.p2, q.x2}; });
                 });
}

// (mass at zero, weight, value) of a distribution with at most one non-zero value.
inline std::array<double, 3> reduced_shape(const FiniteDistribution& d) {
  std::array<double, 3> s{d.mass_at_zero(), 0.0, 0.0};
  for (const auto& a : d.atoms())
    if (a.value >= tol::zero_value) s = {s[0], a.weight, a.value};
  return s;
}

inline ScanReport reduction_witness(const SuiteOptions& o) {
  return sampled("reduction_witness", config(o, tol::reduced_match, reduction_samples),
                 [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
                   const auto d = random_distribution(rng, reduction_max_atoms);
                   const auto got = reduced_shape(reduce(d));
                   const auto want = reduced_shape(optimum_certificate(mean(d), expected_entropy(d)).witness);
                   double err = 0.0;
                   for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(got[i] - want[i]));
                   t.offer(-err, k, [&] { return flatten(d); });
                 });
}

inline ScanReport reduction_monotone(const SuiteOptions& o) {
  return sampled("reduction_monotone", config(o, tol::pipeline, reduction_samples),
                 [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
                   const auto d = random_distribution(rng, reduction_max_atoms);
                   const auto trace = reduce_traced(d);
                   double worst = std::numeric_limits<double>::infinity();
                   for (std::size_t i = 0; i + 1 < trace.stages.size(); ++i) {
                     worst = std::min(worst, expected_joint_entropy(trace.stages[i]) -
                                                 expected_joint_entropy(trace.stages[i + 1]));
                   }
                   const auto& r = trace.result();
                   worst = std::min({worst, -std::abs(mean(r) - mean(d)),
                                     -std::abs(expected_entropy(r) - expected_entropy(d))});
                   t.offer(worst, k, [&] { return flatten(d); });
                 });
}

// Three random values; weights from the moment system [1 1 1; x; H(x)] w = [1; t; u].
inline std::optional<FiniteDistribution> three_atom_feasible(Rng& rng, double t, double u) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double x[3] = {unit(rng), unit(rng), unit(rng)};
  if (unit(rng) < 1.0 / 3.0) x[0] = 0.0;
  const double h[3] = {detail::entropy(x[0]), detail::entropy(x[1]), detail::entropy(x[2])};
  auto det3 = [](double a1, double a2, double a3, double b1, double b2, double b3, double c1, double c2, double c3) {
    return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
  };
  const double det = det3(1, 1, 1, x[0], x[1], x[2], h[0], h[1], h[2]);
  if (std::abs(det) < 1e-12) return std::nullopt;
  const double w0 = det3(1, 1, 1, t, x[1], x[2], u, h[1], h[2]) / det;
  const double w1 = det3(1, 1, 1, x[0], t, x[2], h[0], u, h[2]) / det;
  const double w2 = 1.0 - w0 - w1;
  if (w0 < 0 || w1 < 0 || w2 < 0) return std::nullopt;
  return FiniteDistribution({{w0, x[0]}, {w1, x[1]}, {w2, x[2]}});
}

inline ScanReport optimum_oracle(const SuiteOptions& o) {
  auto cfg = config(o, tol::oracle, oracle_pairs);
  const auto draws = o.samples ? std::max<std::uint64_t>(1, *o.samples / oracle_pairs) : oracle_draws;
  auto r = sampled("optimum_oracle", cfg, [&](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tm = 0.05 + 0.9 * unit(rng);
    const double u = detail::entropy(tm) * (0.05 + 0.95 * unit(rng));
    const auto cert = optimum_certificate(tm, u);
    for (std::uint64_t s = 0; s < draws; ++s) {
      const auto d = three_atom_feasible(rng, tm, u);
      if (!d) continue;
      t.offer(expected_joint_entropy(*d) - cert.optimum, k, [&] {
        auto w = flatten(*d);
        w.insert(w.begin(), {tm, u});
        return w;
      });
    }
  });
  r.extras["draws_per_pair"] = static_cast<double>(draws);
  return r;
}

// --- inequality lab -------------------------------------------------------

inline ScanReport lab_turlough(const SuiteOptions& o) {
  return refined(scan_ratio_monotone, grid_config(o, tol::finite_difference, 1e-4, 1 - 1e-4, defaults::grid_step));
}

inline ScanReport lab_adric(const SuiteOptions& o) {
  return refined(scan_adric_monotone,
                 grid_config(o, tol::finite_difference, golden_threshold, 1 - 1e-6, defaults::grid_step));
}

inline ScanReport lab_mercy(const SuiteOptions& o) {
  return refined(scan_mercy_decreasing, grid_config(o, tol::finite_difference, 1e-6, 1 - 1e-6, defaults::grid_step));
}

inline ScanReport lab_peri(const SuiteOptions& o) {
  std::vector<ScanReport> parts;
  for (double alpha : peri_alphas) {
    parts.push_back(refined([alpha](const ScanConfig& c) { return scan_peri_convexity(alpha, c); },
                            grid_config(o, tol::finite_difference, 0.05, 20.0, defaults::grid_step)));
  }
  auto r = combine(parts);
  r.extras["alpha_count"] = static_cast<double>(peri_alphas.size());
  return r;
}

inline ScanReport lab_main(const SuiteOptions& o) {
  return scan_lemma_main(config(o, tol::closed_form, defaults::verify_lemma_samples));
}

inline ScanReport lab_main2(const SuiteOptions& o) {
  return scan_lemma_main2(config(o, tol::closed_form, defaults::verify_lemma_samples));
}

/// check_lemma_main(d, alpha) against check_lemma_main2(1 - d, 1 - alpha).
inline ScanReport lab_main_bridge(const SuiteOptions& o) {
  return sampled("main_bridge", config(o, 1e-12, bridge_pairs), [](Rng& rng, std::uint64_t k, detail::MinTracker& t) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
      const auto d = random_distribution(rng);
      const double m = mean(d);
      if (m > frequency_bound) continue;
      const double alpha = std::max(m, 1e-3) + (frequency_bound - std::max(m, 1e-3)) * unit(rng);
      std::vector<Atom> flipped;
      for (const auto& a : d.atoms()) flipped.push_back({a.weight, 1.0 - a.value});
      const double diff = check_lemma_main(d, alpha) - check_lemma_main2(FiniteDistribution(flipped), 1.0 - alpha);
      t.offer(-std::abs(diff), k, [&] {
        auto w = flatten(d);
        w.insert(w.begin(), alpha);
        return w;
      });
      return;
    }
  });
}

// --- set families ---------------------------------------------------------

inline ScanReport family_theorem1(const SuiteOptions& o) {
  return scan_theorem1(config(o, tol::closed_form, defaults::samples), UnionBoundConstant::stated);
}

inline ScanReport family_theorem1_lemma(const SuiteOptions& o) {
  return scan_theorem1(config(o, tol::closed_form, defaults::samples), UnionBoundConstant::lemma);
}

/// Every union-closed family on n <= 4 other than {empty set}. Pass/fail is the
/// exact integer decision; min_margin is the floating-point frequency gap.
inline ScanReport family_theorem2(const SuiteOptions& o) {
  ScanReport r;
  r.name = "theorem2";
  r.config = config(o, tol::closed_form, 0);
  r.passed = true;
  for (int n = 0; n <= census_max_n; ++n) {
    const auto c = theorem2_census(n, o.workers);
    r.points_checked += c.rows.size();
    r.passed = r.passed && c.failures == 0;
    r.extras["families_n" + std::to_string(n)] = static_cast<double>(c.families);
    r.extras["half_failures_n" + std::to_string(n)] = static_cast<double>(c.half_failures);
    if (c.weakest && c.weakest->margin < r.min_margin) {
      r.min_margin = c.weakest->margin;
      r.witness = {static_cast<double>(n), static_cast<double>(c.weakest->family_id),
                   static_cast<double>(c.weakest->max_count), static_cast<double>(c.weakest->size)};
    }
  }
  return r;
}

/// H(A) - H(A u B) for A, B uniform on each union-closed family with n <= 3.
inline ScanReport family_entropy_bridge(const SuiteOptions& o) {
  detail::MinTracker t;
  std::uint64_t k = 0;
  for (int n = 0; n <= entropy_bridge_max_n; ++n) {
    for_each_union_closed(n, [&](const SetFamily& f) {
      const auto d = uniform_on(f);
      t.offer(entropy_of(d) - entropy_of(union_distribution(d)), k++, [&] {
        std::vector<double> w{static_cast<double>(n)};
        for (Mask m : f.members()) w.push_back(m);
        return w;
      });
    });
  }
  return detail::finish("uniform_entropy", config(o, entropy_bridge_slack, 0), t);
}

}  // namespace suite

inline std::vector<SuiteCheck> verification_suite() {
  using M = SuiteModule;
  return {
      {M::kernel, "kernel_round_trip", suite::kernel_round_trip},
      {M::kernel, "kernel_inverse", suite::kernel_inverse},
      {M::distribution, "merge_conservation", suite::merge_conservation},
      {M::distribution, "merge_weight", suite::merge_weight},
      {M::distribution, "merge_scaled_entropy", suite::merge_scaled_entropy},
      {M::distribution, "merge_pair_joint", suite::merge_pair_joint},
      {M::distribution, "reduction_witness", suite::reduction_witness},
      {M::distribution, "reduction_monotone", suite::reduction_monotone},
      {M::distribution, "optimum_oracle", suite::optimum_oracle},
      {M::lab, "turlough", suite::lab_turlough},
      {M::lab, "adric", suite::lab_adric},
      {M::lab, "mercy", suite::lab_mercy},
      {M::lab, "peri", suite::lab_peri},
      {M::lab, "main", suite::lab_main},
      {M::lab, "main2", suite::lab_main2},
      {M::lab, "main_bridge", suite::lab_main_bridge},
      {M::setfamily, "theorem1", suite::family_theorem1},
      {M::setfamily, "theorem1_lemma_constant", suite::family_theorem1_lemma},
      {M::setfamily, "theorem2", suite::family_theorem2},
      {M::setfamily, "uniform_entropy", suite::family_entropy_bridge},
  };
}

}  // namespace ucentropy
