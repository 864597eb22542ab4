#pragma once

// Plain-text distribution files: one `weight value` pair per line, `#` starts
// a comment. Weights are rescaled on load when they sum to 1 within 1e-6.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ucentropy/distribution.hpp"

namespace ucentropy {

inline constexpr double load_weight_slack = 1e-6;

inline FiniteDistribution read_distribution(std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double weight = 0.0;
    double value = 0.0;
    if (!(fields >> weight)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw parse_error("expected `weight value`", lineno);
    }
    if (!(fields >> value)) throw parse_error("missing value after weight", lineno);
    std::string extra;
    if (fields >> extra) throw parse_error("trailing text `" + extra + "`", lineno);
    if (!std::isfinite(weight) || weight < 0.0) throw parse_error("weight must be finite and >= 0", lineno);
    if (!(value >= 0.0 && value <= 1.0)) throw parse_error("value outside [0,1]", lineno);
    atoms.push_back({weight, value});
  }
  if (atoms.empty()) throw parse_error("no atoms", 0);

  double sum = 0.0;
  for (const auto& a : atoms) sum += a.weight;
  if (std::abs(sum - 1.0) > load_weight_slack) {
    throw parse_error("weights sum to " + std::to_string(sum) + ", not 1", 0);
  }
  for (auto& a : atoms) a.weight /= sum;
  return FiniteDistribution(std::move(atoms));
}

inline FiniteDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path, 0);
  return read_distribution(in);
}

inline void write_distribution(std::ostream& out, const FiniteDistribution& d) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& a : d.atoms()) out << a.weight << ' ' << a.value << '\n';
  out.precision(old);
}

inline std::string to_text(const FiniteDistribution& d) {
  std::ostringstream out;
  write_distribution(out, d);
  return out.str();
}

}  // namespace ucentropy
