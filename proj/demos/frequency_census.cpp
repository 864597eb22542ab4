// Every union-closed family on a small ground set, bucketed by its largest
// element frequency.

#include <cstdio>
#include <cstdlib>
#include <map>

#include "ucentropy/ucentropy.hpp"

using namespace ucentropy;

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 3;
  const auto census = theorem2_census(n);

  std::map<double, std::uint64_t> histogram;
  for (const auto& row : census.rows)
    histogram[static_cast<double>(row.max_count) / static_cast<double>(row.size)]++;

  std::printf("n = %d: %llu union-closed families (%zu besides {empty set})\n", n,
              static_cast<unsigned long long>(census.families), census.rows.size());
  std::printf("%-16s %s\n", "max frequency", "families");
  for (const auto& [freq, count] : histogram) std::printf("%-16.6f %llu\n", freq, static_cast<unsigned long long>(count));
  std::printf("bound (3 - sqrt 5)/2 = %.6f, failures: %llu\n", frequency_bound,
              static_cast<unsigned long long>(census.failures));
  return census.failures == 0 ? 0 : 1;
}
