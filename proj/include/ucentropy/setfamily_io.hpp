#pragma once

// Family files: first line `n=<ground_n>`, then one set per line as
// comma-separated 1-based element indices, or the literal `empty` for the
// empty set. Blank lines and `#` comments are ignored. Sweep results go out
// as CSV rows: family_id,size,max_frequency_num,max_frequency_den,margin.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ucentropy/errors.hpp"
#include "ucentropy/setfamily.hpp"

namespace ucentropy {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline int parse_int(const std::string& token, int line) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw parse_error("expected an integer, got `" + token + "`", line);
  }
  if (token.size() > 6) throw parse_error("integer out of range: " + token, line);
  return std::stoi(token);
}

}  // namespace detail

inline SetFamily read_family(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<Mask> members;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (n < 0) {
      if (line.rfind("n=", 0) != 0) throw parse_error("first line must be `n=<ground_n>`", lineno);
      n = detail::parse_int(detail::trim(line.substr(2)), lineno);
      if (n > max_ground_size) throw parse_error("ground set larger than " + std::to_string(max_ground_size), lineno);
      continue;
    }

    if (line == "empty") {
      members.push_back(0);
      continue;
    }
    Mask m = 0;
    std::istringstream parts(line);
    std::string token;
    while (std::getline(parts, token, ',')) {
      const int e = detail::parse_int(detail::trim(token), lineno);
      if (e < 1 || e > n) throw parse_error("element " + std::to_string(e) + " outside [1, " + std::to_string(n) + "]", lineno);
      m |= Mask{1} << (e - 1);
    }
    if (!line.empty() && line.back() == ',') throw parse_error("trailing comma", lineno);
    members.push_back(m);
  }
  if (n < 0) throw parse_error("missing `n=<ground_n>` header", 0);
  return SetFamily(n, std::move(members));
}

inline SetFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path, 0);
  return read_family(in);
}

/// `1,3` style rendering of one subset; `empty` for the empty set.
inline std::string format_subset(Mask m) {
  if (m == 0) return "empty";
  std::string out;
  for (int i = 0; i < 32; ++i) {
    if (!(m >> i & 1U)) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1);
  }
  return out;
}

/// Members in canonical (ascending mask) order.
inline void write_family(std::ostream& out, const SetFamily& f) {
  out << "n=" << f.ground_n() << '\n';
  for (Mask m : f.members()) out << format_subset(m) << '\n';
}

inline std::string to_text(const SetFamily& f) {
  std::ostringstream out;
  write_family(out, f);
  return out.str();
}

inline constexpr const char* census_csv_header = "family_id,size,max_frequency_num,max_frequency_den,margin";

inline void write_census_row(std::ostream& out, const CensusRow& row) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << row.family_id << ',' << row.size << ',' << row.max_count << ',' << row.size << ',' << row.margin << '\n';
  out.precision(old);
}

}  // namespace ucentropy
