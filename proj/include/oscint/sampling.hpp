#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oscint/filters.hpp"
#include "oscint/system.hpp"

namespace oscint {

struct RandomSystemSpec {
  std::size_t dim = 4;
  double omega_max = 1e3;
  double zero_frequency_probability = 0.2;
  double a_norm = 1.0;  // ||A|| of the drawn coupling
};

/// Frequencies uniform in [0, omega_max] (exactly 0 with the given
/// probability) and a random Hermitian coupling scaled to ||A|| = a_norm.
OscillatorSystem random_system(std::mt19937_64& rng, const RandomSystemSpec& spec);

/// Redraws until M_h is positive definite for every pair and step size
/// given, so the modified energy bounds the trajectory. Throws
/// std::runtime_error after max_attempts draws.
OscillatorSystem random_bounded_system(std::mt19937_64& rng, const RandomSystemSpec& spec,
                                       const std::vector<const FilterPair*>& pairs,
                                       const std::vector<double>& step_sizes,
                                       std::size_t max_attempts = 10000);

/// Standard normal real and imaginary parts.
State random_state(std::mt19937_64& rng, std::size_t dim);
CMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim);

/// Matrix M_h with 𝓗(q, q̇) = ½||q̇||² + ½ q* M_h q.
CMatrix modified_energy_matrix(const OscillatorSystem& sys, const FilterPair& fp, double h);

/// Smallest eigenvalue of M_h; positive means trajectories of a compliant
/// method stay bounded.
double modified_energy_min_eigenvalue(const OscillatorSystem& sys, const FilterPair& fp, double h);

}  // namespace oscint
