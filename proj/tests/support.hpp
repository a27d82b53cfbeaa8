#pragma once

// Shared fixtures for the unit tests and the acceptance binary.

#include <algorithm>
#include <map>
#include <cmath>
#include <random>
#include <vector>

#include "oscint/filters.hpp"
#include "oscint/linalg.hpp"
#include "oscint/sampling.hpp"
#include "oscint/system.hpp"
#include "oscint/wave.hpp"

namespace oscint::testing {

inline std::vector<const FilterPair*> compliant_pairs() {
  std::vector<const FilterPair*> out;
  for (const auto& fp : catalog())
    if (fp.hl_compliant) out.push_back(&fp);
  return out;
}

inline CVector random_vector(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n;
  CVector v(d);
  for (auto& z : v) z = Complex(n(rng), n(rng));
  return v;
}

/// max_j |a_j - b_j| / max(||a||_inf, ||b||_inf, tiny)
inline double rel_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double d = 0.0, s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    d = std::max(d, std::abs(a[j] - b[j]));
    s = std::max({s, std::abs(a[j]), std::abs(b[j])});
  }
  return s > 0.0 ? d / s : d;
}

inline double state_rel_diff(const State& a, const State& b) {
  CVector x(a.q), y(b.q);
  x.insert(x.end(), a.qdot.begin(), a.qdot.end());
  y.insert(y.end(), b.qdot.begin(), b.qdot.end());
  return rel_diff(x, y);
}

inline CMatrix diagonal(std::span<const double> d) {
  CMatrix m(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) m(j, j) = d[j];
  return m;
}

/// Random system whose modified energy is positive definite for every
/// compliant pair at every listed h (otherwise trajectories grow without
/// bound and relative drifts lose meaning).
inline OscillatorSystem bounded_system(std::mt19937_64& rng, std::size_t d, double omega_max,
                                       double a_norm, const std::vector<double>& hs,
                                       double zero_probability = 0.2) {
  RandomSystemSpec spec;
  spec.dim = d;
  spec.omega_max = omega_max;
  spec.a_norm = a_norm;
  spec.zero_frequency_probability = zero_probability;
  return random_bounded_system(rng, spec, compliant_pairs(), hs);
}

/// Standard normal V_j for 0 ≤ j ≤ J (V_0 real), conjugates filled in.
inline wave::PotentialSpec random_potential(std::mt19937_64& rng, int J) {
  std::normal_distribution<double> n;
  std::map<int, Complex> c;
  for (int j = 0; j <= J; ++j) c[j] = j == 0 ? Complex(n(rng), 0.0) : Complex(n(rng), n(rng));
  return wave::PotentialSpec::from_nonnegative(std::move(c));
}

/// A q through the grid: synthesize, multiply by V(x_k), interpolate
inline CVector collocation_product(std::size_t K, const wave::PotentialSpec& v, const CVector& q) {
  CVector u = wave::synthesize(q);
  const RVector x = wave::collocation_points(K);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= v.evaluate(x[k]);
  return wave::trig_interpolate(u);
}

}  // namespace oscint::testing
