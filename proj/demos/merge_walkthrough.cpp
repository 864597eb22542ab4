// Merge two atoms, reduce a random distribution, and compare with the
// closed-form optimum for its (mean, expected entropy).

#include <cstdio>

#include "ucentropy/ucentropy.hpp"

using namespace ucentropy;

int main() {
  const auto m = merge(0.5, 0.25, 0.5, 0.75);
  std::printf("merge (0.5, 0.25) + (0.5, 0.75) -> q = %.12f, y = %.12f, mass at zero %.12f\n", m.q, m.y,
              m.residual_at_zero);

  Rng rng(2024);
  const auto d = random_distribution(rng, 8);
  std::printf("\ninput (%zu atoms):\n", d.size());
  for (const auto& a : d.atoms()) std::printf("  %.6f  %.6f\n", a.weight, a.value);

  const auto trace = reduce_traced(d);
  std::printf("\nE[H(X1 X2)] per merge step:\n");
  for (const auto& stage : trace.stages) std::printf("  %.12f\n", expected_joint_entropy(stage));

  const double t = mean(d), u = expected_entropy(d);
  const auto cert = optimum_certificate(t, u);
  std::printf("\nt = %.12f  u = %.12f  v = g(u/t) = %.12f\n", t, u, cert.v);
  std::printf("closed-form optimum t^2 H(v^2)/v^2 = %.12f\n", cert.optimum);
  std::printf("reduced distribution:\n");
  for (const auto& a : trace.result().atoms()) std::printf("  %.12f  %.12f\n", a.weight, a.value);
}
