#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "ucentropy/distribution_io.hpp"
#include "ucentropy/report_json.hpp"
#include "ucentropy/setfamily_io.hpp"

using namespace ucentropy;

namespace {

FiniteDistribution parse_dist(const std::string& text) {
  std::istringstream in(text);
  return read_distribution(in);
}

SetFamily parse_family(const std::string& text) {
  std::istringstream in(text);
  return read_family(in);
}

int parse_error_line(const std::string& text) {
  try {
    parse_family(text);
  } catch (const parse_error& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST(DistributionText, ParsesCommentsAndBlankLines) {
  const auto d = parse_dist("# two atoms\n0.5 0.25\n\n  0.5 0.75   # upper\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].value, 0.25);
  EXPECT_EQ(d[1].weight, 0.5);
  EXPECT_DOUBLE_EQ(mean(d), 0.5);
}

TEST(DistributionText, RenormalizesSmallDrift) {
  const auto d = parse_dist("0.3333333 0.1\n0.3333333 0.2\n0.3333333 0.3\n");
  EXPECT_NEAR(d.total_weight(), 1.0, 1e-15);
  EXPECT_THROW(parse_dist("0.5 0.1\n0.4 0.2\n"), parse_error);
}

TEST(DistributionText, Errors) {
  EXPECT_THROW(parse_dist(""), parse_error);
  EXPECT_THROW(parse_dist("0.5\n"), parse_error);
  EXPECT_THROW(parse_dist("1 0.5 extra\n"), parse_error);
  EXPECT_THROW(parse_dist("1 1.5\n"), parse_error);
  EXPECT_THROW(parse_dist("-1 0.5\n2 0.5\n"), parse_error);
  try {
    parse_dist("0.5 0.1\nabc\n");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line, 2);
  }
}

TEST(DistributionText, RoundTripIsExact) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_distribution(rng);
    const auto back = parse_dist(to_text(d));
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      ASSERT_EQ(back[k].value, d[k].value);
      ASSERT_NEAR(back[k].weight, d[k].weight, 1e-15);
    }
  }
}

TEST(FamilyText, ParsesAndCanonicalizes) {
  const auto f = parse_family("# sample\nn=3\n1,2\nempty\n 3 \n2, 1\n");
  EXPECT_EQ(f.ground_n(), 3);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(to_text(f), "n=3\nempty\n1,2\n3\n");
  EXPECT_EQ(format_subset(0b1011), "1,2,4");
}

TEST(FamilyText, RoundTrip) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_union_closed_family(rng, 1 + i % 8);
    const auto back = parse_family(to_text(f));
    ASSERT_TRUE(std::equal(f.members().begin(), f.members().end(), back.members().begin(), back.members().end()));
    ASSERT_EQ(back.ground_n(), f.ground_n());
  }
}

TEST(FamilyText, Errors) {
  EXPECT_EQ(parse_error_line("1,2\n"), 1);
  EXPECT_EQ(parse_error_line("n=2\n1,3\n"), 2);
  EXPECT_EQ(parse_error_line("n=2\n1\n1,\n"), 3);
  EXPECT_EQ(parse_error_line("n=2\n1,,2\n"), 2);
  EXPECT_EQ(parse_error_line("n=2\n0\n"), 2);
  EXPECT_EQ(parse_error_line("n=x\n"), 1);
  EXPECT_EQ(parse_error_line("n=17\n"), 1);
  EXPECT_EQ(parse_error_line("# nothing\n"), 0);
  EXPECT_THROW(load_family("/nonexistent/family.txt"), parse_error);
}

TEST(CensusCsv, RowFormat) {
  std::ostringstream out;
  write_census_row(out, CensusRow{7, 4, 2, 0.5 - frequency_bound, true, true});
  EXPECT_EQ(out.str().substr(0, 8), "7,4,2,4,");
  EXPECT_NEAR(std::stod(out.str().substr(8)), 0.5 - frequency_bound, 0.0);
}

TEST(ReportJson, NonFiniteValuesSurvive) {
  ScanReport r;
  r.name = "turlough";
  r.points_checked = 0;
  r.min_margin = std::numeric_limits<double>::infinity();
  r.extras["value_at_lo"] = std::numeric_limits<double>::quiet_NaN();
  r.extras["value_at_hi"] = -std::numeric_limits<double>::infinity();
  const nlohmann::json j = r;
  EXPECT_EQ(j.at("min_margin"), "inf");
  const auto back = nlohmann::json::parse(j.dump()).get<ScanReport>();
  EXPECT_TRUE(std::isinf(back.min_margin));
  EXPECT_TRUE(std::isnan(back.extras.at("value_at_lo")));
  EXPECT_EQ(back.extras.at("value_at_hi"), -std::numeric_limits<double>::infinity());
}

TEST(ReportJson, ConfigRoundTrip) {
  ScanConfig c;
  c.seed = 1234567890123ULL;
  c.range_lo = 0.25;
  c.tolerance = 1e-9;
  EXPECT_EQ(nlohmann::json(c).get<ScanConfig>(), c);
}
