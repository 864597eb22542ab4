#include <gtest/gtest.h>

#include <cmath>
#include <iostream>

#include "oracles.hpp"
#include "ucentropy/inequality_lab.hpp"
#include "ucentropy/report_json.hpp"

using namespace ucentropy;

namespace {

// H(a) for small a from the series (1 - a) ln(1 - a) = -a + a^2/2 + a^3/6 + a^4/12 + ...
double small_entropy_series(double a) {
  return (a * std::log(1.0 / a) + a - a * a / 2 - a * a * a / 6 - a * a * a * a / 12) / std::numbers::ln2;
}

ScanConfig grid(double lo, double hi, double step) {
  ScanConfig c;
  c.range_lo = lo;
  c.range_hi = hi;
  c.grid_step = step;
  c.tolerance = tol::finite_difference;
  return c;
}

ScanConfig random_cfg(std::uint64_t samples, std::uint64_t seed = 42) {
  ScanConfig c;
  c.random_samples = samples;
  c.seed = seed;
  c.tolerance = tol::closed_form;
  return c;
}

}  // namespace

TEST(SquareEntropyRatio, GoldenPointIsOne) {
  EXPECT_NEAR(square_entropy_ratio(golden_threshold), 1.0, 1e-12);
  EXPECT_NEAR(scaled_square_entropy_ratio(golden_threshold), std::numbers::phi, 1e-12);
}

TEST(SquareEntropyRatio, EndpointLimitsAgainstSeries) {
  const double x = 1e-4;
  EXPECT_NEAR(square_entropy_ratio(x), small_entropy_series(x * x) / small_entropy_series(x), 1e-12);
  const double e = 1e-4;  // R(1 - e) = H(2e - e^2) / H(e)
  EXPECT_NEAR(square_entropy_ratio(1.0 - e), small_entropy_series(2 * e - e * e) / small_entropy_series(e), 1e-11);
  EXPECT_LT(square_entropy_ratio(1e-4), 1e-3);
  EXPECT_LT(std::abs(2.0 - square_entropy_ratio(1.0 - 1e-12)), std::abs(2.0 - square_entropy_ratio(1.0 - 1e-4)));
  EXPECT_EQ(square_entropy_ratio(0.0), 0.0);
  EXPECT_EQ(square_entropy_ratio(1.0), 2.0);
}

TEST(ScanRatioMonotone, PassesOnFullGrid) {
  const auto r = scan_ratio_monotone(grid(1e-4, 1 - 1e-4, 1e-4));
  EXPECT_TRUE(r.passed) << r.min_margin;
  EXPECT_EQ(r.points_checked, 9998u);
  EXPECT_GT(r.min_margin, 0.0);
  EXPECT_EQ(replay(r), r.min_margin);
  EXPECT_NEAR(r.extras.at("value_at_lo"), square_entropy_ratio(1e-4), 0.0);
}

TEST(ScanRatioMonotone, RejectsClosedRange) {
  EXPECT_THROW(scan_ratio_monotone(grid(0.0, 0.5, 1e-3)), precondition_error);
  EXPECT_THROW(scan_ratio_monotone(grid(0.5, 0.4, 1e-3)), precondition_error);
}

TEST(ScanAdricMonotone, PassesAboveGoldenThreshold) {
  const auto r = scan_adric_monotone(grid(0.6180339887, 1 - 1e-6, 1e-5));
  EXPECT_TRUE(r.passed) << r.min_margin;
  EXPECT_EQ(replay(r), r.min_margin);
}

TEST(ScanAdricMonotone, BelowGoldenThresholdIsExploratory) {
  const auto r = scan_adric_monotone(grid(0.5, 0.618, 1e-4));
  std::cout << "[exploratory] adric on [0.5, 0.618]: passed=" << r.passed << " min_margin=" << r.min_margin
            << " at x=" << r.witness.at(0) << '\n';
  EXPECT_EQ(replay(r), r.min_margin);
}

TEST(RateComposition, IdentityWhenAlphaIsOne) {
  for (double x : {0.1, 1.0, 3.0, 9.0}) EXPECT_NEAR(rate_composition(1.0, x), x, 1e-12 * std::max(1.0, x));
  const auto r = scan_peri_convexity(1.0, grid(0.05, 10.0, 1e-2));
  EXPECT_LT(std::abs(r.min_margin), 1e-11);
}

TEST(RateComposition, SlopeFormulaMatchesFiniteDifference) {
  for (double alpha : {0.1, 0.5, 0.9}) {
    for (double x : {0.1, 0.7, 2.0, 5.0, 12.0}) {
      const double fd = oracle::central_difference([&](double s) { return rate_composition(alpha, s); }, x, 1e-6);
      EXPECT_NEAR(rate_composition_slope(alpha, x), fd, tol::derivative) << alpha << ' ' << x;
    }
  }
}

TEST(ScanPeriConvexity, HalfAlphaPasses) {
  const auto r = scan_peri_convexity(0.5, grid(0.05, 10.0, 1e-3));
  EXPECT_TRUE(r.passed) << r.min_margin;
  EXPECT_EQ(replay(r), r.min_margin);
  EXPECT_EQ(r.extras.at("alpha"), 0.5);
}

TEST(ScanPeriConvexity, Preconditions) {
  EXPECT_THROW(scan_peri_convexity(0.0, grid(0.05, 1.0, 1e-2)), precondition_error);
  EXPECT_THROW(scan_peri_convexity(0.5, grid(0.05, 30.0, 1e-2)), precondition_error);
}

TEST(LogRatio, ValuesAndLimit) {
  EXPECT_NEAR(log_ratio(0.5), std::numbers::ln2, 1e-15);
  // -(1-z) ln(1-z)/z = 1 - z/2 - z^2/6 - z^3/12 - ...
  for (double z : {1e-3, 1e-6, 1e-9}) EXPECT_NEAR(log_ratio(z), 1 - z / 2 - z * z / 6 - z * z * z / 12, 1e-13);
  EXPECT_EQ(log_ratio(0.0), 1.0);
}

TEST(ScanMercyDecreasing, Passes) {
  const auto r = scan_mercy_decreasing(grid(1e-6, 1 - 1e-6, 1e-4));
  EXPECT_TRUE(r.passed) << r.min_margin;
  EXPECT_GT(r.min_margin, 0.0);
  EXPECT_EQ(replay(r), r.min_margin);
}

TEST(LemmaMain, EqualityCases) {
  for (double alpha : {0.05, 0.2, frequency_bound}) {
    EXPECT_NEAR(check_lemma_main(FiniteDistribution::point_mass(alpha), alpha), 0.0, tol::closed_form);
  }
  EXPECT_EQ(check_lemma_main(FiniteDistribution::point_mass(0.0), 0.3), 0.0);
}

TEST(LemmaMain, Preconditions) {
  EXPECT_THROW(check_lemma_main(FiniteDistribution::point_mass(0.3), 0.2), precondition_error);
  EXPECT_THROW(check_lemma_main(FiniteDistribution::point_mass(0.1), 0.39), precondition_error);
  EXPECT_THROW(check_lemma_main(FiniteDistribution::point_mass(0.1), 0.0), precondition_error);
}

TEST(LemmaMain2, EqualityAtGoldenPointMass) {
  EXPECT_NEAR(check_lemma_main2(FiniteDistribution::point_mass(golden_threshold), golden_threshold), 0.0,
              tol::closed_form);
  EXPECT_THROW(check_lemma_main2(FiniteDistribution::point_mass(0.9), 0.6), precondition_error);
  EXPECT_THROW(check_lemma_main2(FiniteDistribution::point_mass(0.7), 0.8), precondition_error);
}

TEST(LemmaMain2, ComplementBridgeWithLemmaMain) {
  Rng rng(21);
  int paired = 0;
  while (paired < 10000) {
    const auto d = random_distribution(rng);
    if (mean(d) > frequency_bound) continue;
    std::vector<Atom> flipped;
    for (const auto& a : d.atoms()) flipped.push_back({a.weight, 1.0 - a.value});
    const FiniteDistribution w(flipped);
    const double alpha = std::max(mean(d), 1e-3);
    const double beta = 1.0 - alpha;
    if (beta < golden_threshold) continue;
    ASSERT_NEAR(check_lemma_main(d, alpha), check_lemma_main2(w, beta), 1e-12);
    ++paired;
  }
}

TEST(LemmaMain2, ChainCertifiesOptimumFamily) {
  Rng rng(22);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = golden_threshold + (1.0 - golden_threshold) * 0.999 * unit(rng);
    const double u = binary_entropy(t) * (0.01 + 0.99 * unit(rng));
    const auto cert = optimum_certificate(t, u);
    const double beta = std::min(t, mean(cert.witness));
    ASSERT_GE(check_lemma_main2(cert.witness, beta), -tol::closed_form);
    const auto chain = lemma_main2_chain(cert.witness, beta);
    ASSERT_TRUE(chain.certified()) << chain.optimum_step() << ' ' << chain.monotone_scaled_step() << ' '
                                   << chain.monotone_ratio_step() << ' ' << chain.identity_residual();
    ASSERT_NEAR(chain.optimum_step(), 0.0, 1e-9);
  }
}

TEST(LemmaMain2, ChainStepsSumToMargin) {
  const FiniteDistribution d({{0.3, 0.5}, {0.5, 0.9}, {0.2, 1.0}});
  const auto c = lemma_main2_chain(d, 0.63);
  EXPECT_TRUE(c.certified());
  EXPECT_NEAR(c.optimum_step() + (c.optimum_bound - c.identity_form) + c.monotone_scaled_step() +
                  c.monotone_ratio_step(),
              c.margin(), 1e-15);
}

TEST(RandomScans, LemmaMainAndMain2Pass) {
  const auto a = scan_lemma_main(random_cfg(100000));
  EXPECT_TRUE(a.passed) << a.min_margin;
  EXPECT_EQ(a.points_checked, 100000u);
  EXPECT_EQ(replay(a), a.min_margin);

  const auto b = scan_lemma_main2(random_cfg(100000));
  EXPECT_TRUE(b.passed) << b.min_margin;
  EXPECT_EQ(replay(b), b.min_margin);
  EXPECT_GE(b.extras.at("chain_min_optimum_step"), -tol::closed_form);
  EXPECT_GE(b.extras.at("chain_min_scaled_ratio_step"), -tol::closed_form);
  EXPECT_GE(b.extras.at("chain_min_ratio_step"), -tol::closed_form);
}

TEST(RandomScans, DeterministicAndPartitionIndependent) {
  auto cfg = random_cfg(20000, 7);
  const auto one = scan_lemma_main2(cfg);
  EXPECT_EQ(one, scan_lemma_main2(cfg));
  cfg.workers = 3;
  auto three = scan_lemma_main2(cfg);
  three.config.workers = 1;
  EXPECT_EQ(one, three);

  auto g = grid(1e-4, 1 - 1e-4, 1e-4);
  const auto serial = scan_ratio_monotone(g);
  g.workers = 4;
  auto parallel = scan_ratio_monotone(g);
  parallel.config.workers = 1;
  EXPECT_EQ(serial, parallel);
}

TEST(ThresholdExploration, GoldenAndAbove) {
  auto cfg = random_cfg(20000);
  cfg.grid_step = 1e-3;
  const auto at_golden = threshold_exploration(golden_threshold, golden_threshold, 0.01, cfg);
  ASSERT_EQ(at_golden.rows.size(), 1u);
  EXPECT_NEAR(at_golden.rows[0].min_margin(), 0.0, tol::closed_form);

  const auto high = threshold_exploration(0.9, 0.9, 0.01, cfg);
  EXPECT_GE(high.rows[0].min_margin(), -tol::closed_form);

  const auto sweep = threshold_exploration(0.5, 0.7, 0.05, cfg);
  ASSERT_EQ(sweep.rows.size(), 5u);
  for (const auto& row : sweep.rows) {
    std::cout << "[exploratory] beta=" << row.beta << " random_min=" << row.random_min
              << " family_min=" << row.family_min << " at v=" << row.family_argmin_v << '\n';
  }
  EXPECT_EQ(replay(sweep.summary), sweep.summary.min_margin);
}

TEST(ReportJson, RoundTrip) {
  const auto r = scan_mercy_decreasing(grid(1e-3, 0.5, 1e-3));
  const nlohmann::json j = r;
  const auto back = j.get<ScanReport>();
  EXPECT_EQ(back, r);
  EXPECT_EQ(j.dump(), nlohmann::json(back).dump());
  EXPECT_EQ(to_csv_row(r).substr(0, 6), "mercy,");
}
