#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ucentropy {

/// Argument outside the mathematical domain of a function (NaN, x outside [0,1], ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested (mean, entropy) target admits no distribution.
class feasibility_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input is well-formed but violates the hypothesis of the inequality under test.
/// Distinct from a counterexample: the check was never run.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A family handed to a checker that requires union-closure.
class not_union_closed : public precondition_error {
 public:
  not_union_closed(std::uint32_t a, std::uint32_t b)
      : precondition_error("family is not union-closed"), first(a), second(b) {}

  std::uint32_t first;
  std::uint32_t second;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}

  int line;
};

}  // namespace ucentropy
