#pragma once

// Seeded samplers for the randomized scans.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "ucentropy/distribution.hpp"
#include "ucentropy/report.hpp"

namespace ucentropy {

/// k weights drawn uniformly from the probability simplex.
inline std::vector<double> flat_simplex(Rng& rng, std::size_t k) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& x : w) {
    do {
      x = expo(rng);
    } while (x == 0.0);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

/// Atom count uniform on [1, max_atoms], flat simplex weights, values uniform on [0,1].
inline FiniteDistribution random_distribution(Rng& rng, std::size_t max_atoms = 6) {
  std::uniform_int_distribution<std::size_t> count(1, max_atoms);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto k = count(rng);
  const auto w = flat_simplex(rng, k);
  std::vector<Atom> atoms(k);
  for (std::size_t i = 0; i < k; ++i) atoms[i] = {w[i], unit(rng)};
  return FiniteDistribution(std::move(atoms));
}

/// Flattens a distribution into [w1, x1, w2, x2, ...].
inline std::vector<double> flatten(const FiniteDistribution& d) {
  std::vector<double> out;
  out.reserve(2 * d.size());
  for (const auto& a : d.atoms()) {
    out.push_back(a.weight);
    out.push_back(a.value);
  }
  return out;
}

/// Inverse of flatten, starting at `offset`.
inline FiniteDistribution unflatten(const std::vector<double>& flat, std::size_t offset = 0) {
  if ((flat.size() - offset) % 2 != 0) throw domain_error("flattened distribution has odd length");
  std::vector<Atom> atoms;
  for (std::size_t i = offset; i + 1 < flat.size(); i += 2) atoms.push_back({flat[i], flat[i + 1]});
  return FiniteDistribution(std::move(atoms));
}

}  // namespace ucentropy
