#pragma once

// Seeded generators of random single-input polynomial systems.

#include "lieorder/control_system.hpp"
#include "oracles.hpp"

#include <random>
#include <string>
#include <vector>

namespace lieorder::testing {

inline std::vector<std::string> state_list(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

/// Single-input system on R^n, n in [2, max_states], with monomials of degree
/// <= 2 and integer coefficients in [-2, 2]. Half of the draws use a
/// constant input field along one axis, which makes higher orders common.
inline ControlSystem random_single_input_system(std::mt19937_64& rng, std::size_t max_states = 4) {
  const auto n = std::uniform_int_distribution<std::size_t>(2, max_states)(rng);
  const auto names = state_list(n);
  const double density = std::uniform_real_distribution<double>(0.1, 0.45)(rng);
  VectorField f = random_polynomial_field(rng, names, 2, 2, density);
  VectorField g;
  if (std::bernoulli_distribution(0.5)(rng)) {
    std::vector<Expr> comps(n);
    const auto axis = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const int c = std::uniform_int_distribution<int>(1, 2)(rng) * (std::bernoulli_distribution(0.5)(rng) ? 1 : -1);
    comps[axis] = Expr::constant(Number(c));
    g = VectorField(names, std::move(comps));
  } else {
    g = random_polynomial_field(rng, names, 2, 2, 0.15);
  }
  return ControlSystem(names, std::move(f), {std::move(g)}, std::nullopt, std::nullopt, "random");
}

}  // namespace lieorder::testing
