#include "oscint/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace oscint {

CMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  CMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    a(i, i) = normal(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
      a(j, i) = Complex(re, -im);
    }
  }
  return a;
}

OscillatorSystem random_system(std::mt19937_64& rng, const RandomSystemSpec& spec) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RVector omegas(spec.dim);
  for (auto& w : omegas) {
    const bool zero = unit(rng) < spec.zero_frequency_probability;
    const double draw = unit(rng) * spec.omega_max;
    w = zero ? 0.0 : draw;
  }
  CMatrix a = random_hermitian(rng, spec.dim);
  const double n = hermitian_spectral_norm(a);
  if (n > 0.0) a = (spec.a_norm / n) * a;
  return OscillatorSystem(std::move(omegas), std::move(a));
}

OscillatorSystem random_bounded_system(std::mt19937_64& rng, const RandomSystemSpec& spec,
                                       const std::vector<const FilterPair*>& pairs,
                                       const std::vector<double>& step_sizes,
                                       std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    OscillatorSystem sys = random_system(rng, spec);
    bool ok = true;
    for (const auto* fp : pairs)
      for (double h : step_sizes)
        ok = ok && modified_energy_min_eigenvalue(sys, *fp, h) > 0.0;
    if (ok) return sys;
  }
  throw std::runtime_error("random_bounded_system: no admissible draw");
}

State random_state(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  State s;
  s.q.resize(dim);
  s.qdot.resize(dim);
  for (auto& z : s.q) z = Complex(normal(rng), normal(rng));
  for (auto& z : s.qdot) z = Complex(normal(rng), normal(rng));
  return s;
}

CMatrix modified_energy_matrix(const OscillatorSystem& sys, const FilterPair& fp, double h) {
  const std::size_t d = sys.dim();
  const auto& w = sys.omegas();
  const CMatrix& a = sys.coupling();
  RVector phi(d), c(d), psi2(d);
  for (std::size_t j = 0; j < d; ++j) {
    phi[j] = fp.phi(h * w[j]);
    c[j] = std::cos(h * w[j]);
    const double p = fp.psi1(h * w[j]);
    psi2[j] = p * p;
  }
  CMatrix m(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = 0; l < d; ++l) {
      Complex apa = 0.0;  // (A Ψ₁² A)_jl
      for (std::size_t k = 0; k < d; ++k) apa += a(j, k) * psi2[k] * a(k, l);
      m(j, l) = 0.5 * phi[j] * phi[l] * (c[j] + c[l]) * a(j, l) - 0.25 * h * h * phi[j] * apa * phi[l];
    }
    m(j, j) += w[j] * w[j];
  }
  return m;
}

double modified_energy_min_eigenvalue(const OscillatorSystem& sys, const FilterPair& fp, double h) {
  return hermitian_eig(modified_energy_matrix(sys, fp, h)).values.front();
}

}  // namespace oscint
