#pragma once

// JSON and CSV forms of scan reports. Separate from report.hpp so the math
// headers stay free of the JSON dependency.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ucentropy/report.hpp"

namespace ucentropy {

namespace detail {

// Non-finite margins have no JSON literal; they travel as strings.
inline nlohmann::json real_to_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline double real_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const ScanConfig& c) {
  j = nlohmann::json{{"grid_step", c.grid_step}, {"random_samples", c.random_samples},
                     {"seed", c.seed},           {"tolerance", c.tolerance},
                     {"range_lo", c.range_lo},   {"range_hi", c.range_hi}};
}

inline void from_json(const nlohmann::json& j, ScanConfig& c) {
  j.at("grid_step").get_to(c.grid_step);
  j.at("random_samples").get_to(c.random_samples);
  j.at("seed").get_to(c.seed);
  j.at("tolerance").get_to(c.tolerance);
  j.at("range_lo").get_to(c.range_lo);
  j.at("range_hi").get_to(c.range_hi);
}

inline void to_json(nlohmann::json& j, const ScanReport& r) {
  nlohmann::json extras = nlohmann::json::object();
  for (const auto& [k, v] : r.extras) extras[k] = detail::real_to_json(v);
  j = nlohmann::json{{"name", r.name},
                     {"points_checked", r.points_checked},
                     {"min_margin", detail::real_to_json(r.min_margin)},
                     {"witness", r.witness},
                     {"passed", r.passed},
                     {"config", r.config},
                     {"extras", extras}};
}

inline void from_json(const nlohmann::json& j, ScanReport& r) {
  j.at("name").get_to(r.name);
  j.at("points_checked").get_to(r.points_checked);
  r.min_margin = detail::real_from_json(j.at("min_margin"));
  j.at("witness").get_to(r.witness);
  j.at("passed").get_to(r.passed);
  j.at("config").get_to(r.config);
  r.extras.clear();
  if (j.contains("extras"))
    for (const auto& [k, v] : j.at("extras").items()) r.extras[k] = detail::real_from_json(v);
}

inline constexpr const char* report_csv_header = "name,points_checked,min_margin,passed,seed,tolerance,witness";

/// One CSV row; the witness tuple is joined with ';'.
inline std::string to_csv_row(const ScanReport& r) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << r.name << ',' << r.points_checked << ',' << r.min_margin << ',' << (r.passed ? "true" : "false") << ','
      << r.config.seed << ',' << r.config.tolerance << ',';
  for (std::size_t i = 0; i < r.witness.size(); ++i) out << (i ? ";" : "") << r.witness[i];
  return out.str();
}

}  // namespace ucentropy
