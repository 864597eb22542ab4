#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "ucentropy/setfamily.hpp"

using namespace ucentropy;

namespace {

Mask set_of(std::initializer_list<int> elements) {
  Mask m = 0;
  for (int e : elements) m |= Mask{1} << (e - 1);
  return m;
}

// Union-closed families on [n] found by walking candidates from the top down
// and testing closure with a std::set.
std::set<std::vector<Mask>> brute_union_closed(int n) {
  std::set<std::vector<Mask>> out;
  const unsigned subsets = 1U << n;
  for (std::uint64_t c = (std::uint64_t{1} << subsets) - 1; c >= 1; --c) {
    std::set<Mask> members;
    for (unsigned m = 0; m < subsets; ++m)
      if (c >> m & 1U) members.insert(m);
    bool closed = true;
    for (Mask a : members)
      for (Mask b : members) closed = closed && members.count(a | b);
    if (closed) out.insert({members.begin(), members.end()});
  }
  return out;
}

double naive_entropy_bits(const std::map<Mask, double>& p) {
  double h = 0;
  for (auto [m, q] : p)
    if (q > 0) h -= q * std::log2(q);
  return h;
}

}  // namespace

TEST(SetFamily, NormalizesMembers) {
  const SetFamily f(3, {set_of({1, 2}), 0, set_of({1, 2}), set_of({3})});
  EXPECT_EQ(f.size(), 3u);
  EXPECT_TRUE(f.contains(0));
  EXPECT_FALSE(f.contains(set_of({1})));
  EXPECT_THROW(SetFamily(2, {set_of({3})}), domain_error);
  EXPECT_THROW(SetFamily(17, {}), precondition_error);
}

TEST(SetFamily, UnionViolationIsReported) {
  const SetFamily f(3, {set_of({1}), set_of({2})});
  EXPECT_FALSE(f.union_closed());
  const auto bad = f.union_violation();
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->first | bad->second, set_of({1, 2}));
  EXPECT_TRUE(power_set(3).union_closed());
  EXPECT_EQ(power_set(3).size(), 8u);
}

TEST(UnionClosure, SmallExamples) {
  const std::vector<Mask> gens{set_of({1}), set_of({2}), set_of({3})};
  const auto c = union_closure(3, gens);
  EXPECT_EQ(c.size(), 7u);
  EXPECT_FALSE(c.contains(0));
  EXPECT_TRUE(c.union_closed());

  const auto same = union_closure(c);
  EXPECT_TRUE(std::equal(c.members().begin(), c.members().end(), same.members().begin(), same.members().end()));
  EXPECT_EQ(union_closure(2, std::vector<Mask>{}).size(), 0u);
}

TEST(UnionClosure, RandomFamiliesAreClosed) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 6;
    EXPECT_TRUE(random_union_closed_family(rng, n).union_closed());
  }
}

TEST(FrequencyProfile, Examples) {
  const SetFamily f(2, {set_of({1}), set_of({2}), set_of({1, 2})});
  const auto p = frequency_profile(f);
  EXPECT_EQ(p.counts, (std::vector<std::uint64_t>{2, 2}));
  EXPECT_EQ(p.max_count, 2u);
  EXPECT_EQ(p.argmax_element, 1);
  EXPECT_DOUBLE_EQ(p.max_frequency, 2.0 / 3.0);

  const auto q = frequency_profile(SetFamily(3, {0, set_of({3})}));
  EXPECT_EQ(q.argmax_element, 3);
  EXPECT_DOUBLE_EQ(q.max_frequency, 0.5);
  EXPECT_THROW(frequency_profile(SetFamily(3, {})), precondition_error);
}

TEST(FrequencyBound, ExactDecisionMatchesLongDouble) {
  const long double bound = (3.0L - std::sqrt(5.0L)) / 2.0L;
  for (std::uint64_t size = 1; size <= 400; ++size) {
    for (std::uint64_t count = 0; count <= size; ++count) {
      const long double f = static_cast<long double>(count) / static_cast<long double>(size);
      if (std::abs(f - bound) < 1e-15L) continue;
      ASSERT_EQ(meets_frequency_bound(count, size), f >= bound) << count << '/' << size;
    }
  }
  EXPECT_TRUE(meets_frequency_bound(1u << 16, 1u << 16));
  EXPECT_FALSE(meets_frequency_bound(0, 1u << 16));
  EXPECT_TRUE(meets_half_bound(1, 2));
  EXPECT_FALSE(meets_half_bound(2, 5));
}

TEST(FrequencyBoundCheck, Examples) {
  EXPECT_NEAR(check_theorem2(SetFamily(2, {set_of({1}), set_of({2}), set_of({1, 2})})), 2.0 / 3.0 - frequency_bound,
              1e-15);
  EXPECT_NEAR(check_theorem2(power_set(4)), 0.5 - frequency_bound, 1e-15);
  EXPECT_NEAR(check_theorem2(SetFamily(1, {0, set_of({1})})), 0.5 - frequency_bound, 1e-15);

  try {
    check_theorem2(SetFamily(2, {set_of({1}), set_of({2})}));
    FAIL() << "expected not_union_closed";
  } catch (const not_union_closed& e) {
    EXPECT_EQ(e.first | e.second, set_of({1, 2}));
  }
  EXPECT_THROW(check_theorem2(SetFamily(2, {0})), precondition_error);
  EXPECT_THROW(check_theorem2(SetFamily(2, {})), precondition_error);
}

TEST(Enumeration, SmallCounts) {
  EXPECT_EQ(for_each_union_closed(0, [](const SetFamily&) {}), 1u);
  EXPECT_EQ(for_each_union_closed(1, [](const SetFamily&) {}), 3u);
  EXPECT_EQ(enumerate_union_closed(2).size(), 13u);
  EXPECT_THROW(enumerate_union_closed(5), precondition_error);
}

TEST(Enumeration, AgreesWithReverseOrderFilter) {
  for (int n = 0; n <= 3; ++n) {
    std::set<std::vector<Mask>> ours;
    for (const auto& f : enumerate_union_closed(n)) ours.insert({f.members().begin(), f.members().end()});
    EXPECT_EQ(ours, brute_union_closed(n)) << n;
  }
}

TEST(Census, GroundSetOfFour) {
  const auto c = theorem2_census(4);
  EXPECT_EQ(c.families, 4959u);
  EXPECT_EQ(c.rows.size(), 4958u);
  EXPECT_EQ(c.failures, 0u);
  EXPECT_EQ(c.half_failures, 0u);
  ASSERT_TRUE(c.weakest);
  EXPECT_EQ(2 * c.weakest->max_count, c.weakest->size);
  for (std::size_t i = 0; i < c.rows.size(); ++i) ASSERT_EQ(c.rows[i].family_id, i);

  const auto parallel = theorem2_census(4, 3);
  ASSERT_EQ(parallel.rows.size(), c.rows.size());
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    ASSERT_EQ(parallel.rows[i].size, c.rows[i].size);
    ASSERT_EQ(parallel.rows[i].max_count, c.rows[i].max_count);
  }
}

TEST(Census, Counts) {
  const std::uint64_t expected[] = {1, 3, 13, 121};
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(theorem2_census(n).families, expected[n]);
  EXPECT_FALSE(theorem2_census(0).weakest);
}

TEST(SubsetDistribution, Validation) {
  EXPECT_THROW(SubsetDistribution(2, {{0.5, 1}, {0.5, 1}}), domain_error);
  EXPECT_THROW(SubsetDistribution(2, {{0.5, 1}, {0.4, 2}}), domain_error);
  EXPECT_THROW(SubsetDistribution(2, {{1.0, 4}}), domain_error);
  EXPECT_EQ(SubsetDistribution(2, {{0.0, 1}, {1.0, 2}}).size(), 1u);
}

TEST(UnionDistribution, UniformOnThreeSets) {
  const auto d = uniform_on(SetFamily(2, {set_of({1}), set_of({2}), set_of({1, 2})}));
  const auto u = union_distribution(d);
  std::map<Mask, double> got;
  for (const auto& a : u.atoms()) got[a.mask] = a.probability;
  EXPECT_NEAR(got[set_of({1})], 1.0 / 9, 1e-15);
  EXPECT_NEAR(got[set_of({2})], 1.0 / 9, 1e-15);
  EXPECT_NEAR(got[set_of({1, 2})], 7.0 / 9, 1e-15);
  EXPECT_EQ(got.size(), 3u);
}

TEST(UnionDistribution, ProductMarginals) {
  const std::vector<double> p{0.1, 0.3, 0.37, 0.05};
  const auto d = product_distribution(p);
  const auto m = marginals(d);
  const auto mu = marginals(union_distribution(d));
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(m[i], p[i], 1e-15);
    EXPECT_NEAR(mu[i], 1 - (1 - p[i]) * (1 - p[i]), 1e-14);
  }
}

TEST(UnionDistribution, EntropyBridgeForProducts) {
  // Independent coordinates: H(A) = sum H(p_i), H(A u B) = sum H(2 p_i - p_i^2).
  Rng rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p) x = unit(rng);
    const auto d = product_distribution(p);
    double ha = 0, hu = 0;
    for (double x : p) {
      ha += binary_entropy(x);
      hu += binary_entropy(x * (2 - x));
    }
    ASSERT_NEAR(entropy_of(d), ha, 1e-12);
    ASSERT_NEAR(entropy_of(union_distribution(d)), hu, 1e-12);
  }
}

TEST(UnionDistribution, BruteForceEntropy) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const auto d = random_subset_distribution(rng, n);
    std::map<Mask, double> pu, pa;
    for (const auto& a : d.atoms()) {
      pa[a.mask] += a.probability;
      for (const auto& b : d.atoms()) pu[a.mask | b.mask] += a.probability * b.probability;
    }
    ASSERT_NEAR(entropy_of(d), naive_entropy_bits(pa), 1e-12);
    ASSERT_NEAR(entropy_of(union_distribution(d)), naive_entropy_bits(pu), 1e-12);
  }
}

TEST(UnionEntropyBound, ConstantsAndPreconditions) {
  for (double a : {0.01, 0.1, 0.2, frequency_bound}) {
    EXPECT_GE(union_bound_constant(a, UnionBoundConstant::lemma), union_bound_constant(a, UnionBoundConstant::stated));
    EXPECT_GE(union_bound_constant(a, UnionBoundConstant::lemma), 1.0);
  }
  const auto d = product_distribution(std::vector<double>{0.2, 0.3});
  EXPECT_THROW(check_theorem1(d, 0.25), precondition_error);
  EXPECT_THROW(check_theorem1(d, 0.5), precondition_error);
  EXPECT_GE(check_theorem1(d, 0.3), 0.0);
  EXPECT_GE(check_theorem1(d, 0.3, UnionBoundConstant::lemma), -tol::closed_form);
}

TEST(UnionEntropyBound, ProductAtAlphaIsTight) {
  // A single coordinate with Pr[1 in A] = alpha meets the lemma constant with equality.
  for (double a : {0.05, 0.2, frequency_bound}) {
    const auto d = product_distribution(std::vector<double>{a});
    EXPECT_NEAR(check_theorem1(d, a, UnionBoundConstant::lemma), 0.0, 1e-12);
  }
}

TEST(UnionEntropyBound, RandomScans) {
  ScanConfig cfg;
  cfg.random_samples = 20000;
  cfg.tolerance = tol::closed_form;
  for (auto which : {UnionBoundConstant::stated, UnionBoundConstant::lemma}) {
    const auto r = scan_theorem1(cfg, which);
    EXPECT_TRUE(r.passed) << r.name << ' ' << r.min_margin;
    EXPECT_NEAR(replay_theorem1(r), r.min_margin, 1e-15);
    auto again = cfg;
    again.workers = 2;
    auto r2 = scan_theorem1(again, which);
    r2.config.workers = 1;
    EXPECT_EQ(r, r2);
  }
}
