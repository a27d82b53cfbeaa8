#include "oscint/wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "oscint/errors.hpp"

namespace oscint::wave {

int mode_of_index(std::size_t i, std::size_t k_modes) {
  const auto k = static_cast<int>(k_modes);
  const auto ii = static_cast<int>(i);
  return ii < k ? ii : ii - 2 * k;
}

std::size_t index_of_mode(int j, std::size_t k_modes) {
  const auto k = static_cast<int>(k_modes);
  if (j < -k || j >= k) throw std::out_of_range("mode outside -K..K-1");
  return static_cast<std::size_t>(j >= 0 ? j : j + 2 * k);
}

PotentialSpec::PotentialSpec(std::map<int, Complex> coefficients) : coeffs_(std::move(coefficients)) {
  for (const auto& [j, v] : coeffs_) {
    const Complex partner = coefficient(-j);
    if (partner != std::conj(v)) {
      std::ostringstream os;
      os << "potential is not real-valued: V_" << -j << " = " << partner << " but conj(V_" << j
         << ") = " << std::conj(v);
      throw std::invalid_argument(os.str());
    }
    if (v != 0.0) support_ = std::max(support_, std::abs(j));
  }
}

PotentialSpec PotentialSpec::from_nonnegative(std::map<int, Complex> coefficients) {
  std::map<int, Complex> full;
  for (const auto& [j, v] : coefficients) {
    if (j < 0) throw std::invalid_argument("from_nonnegative: negative mode given");
    full[j] = j == 0 ? Complex(v.real(), 0.0) : v;
    if (j != 0) full[-j] = std::conj(v);
  }
  return PotentialSpec(std::move(full));
}

Complex PotentialSpec::coefficient(int j) const {
  const auto it = coeffs_.find(j);
  return it == coeffs_.end() ? Complex{} : it->second;
}

double PotentialSpec::h1_norm() const {
  double s = 0.0;
  for (const auto& [j, v] : coeffs_) s += (1.0 + double(j) * j) * std::norm(v);
  return std::sqrt(s);
}

double PotentialSpec::evaluate(double x) const {
  Complex s = 0.0;
  for (const auto& [j, v] : coeffs_) s += v * std::polar(1.0, j * x);
  return s.real();
}

bool PotentialSpec::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second == 0.0; });
}

RVector frequencies(std::size_t K, double rho) {
  if (K == 0) throw std::invalid_argument("frequencies: K must be >= 1");
  if (!(rho >= 0.0)) throw std::invalid_argument("frequencies: rho must be >= 0");
  RVector w(2 * K);
  for (std::size_t i = 0; i < 2 * K; ++i) {
    const double j = mode_of_index(i, K);
    w[i] = std::sqrt(j * j + rho);
  }
  return w;
}

CMatrix potential_matrix(std::size_t K, const PotentialSpec& potential) {
  const std::size_t n = 2 * K;
  const int period = static_cast<int>(n);
  const int J = potential.support();
  CMatrix a(n);
  for (std::size_t r = 0; r < n; ++r) {
    const int j = mode_of_index(r, K);
    for (std::size_t c = 0; c < n; ++c) {
      const int l = mode_of_index(c, K);
      const int diff = j - l;
      // all m with |diff + 2Km| ≤ J
      Complex sum = 0.0;
      const int m_lo = static_cast<int>(std::ceil(double(-J - diff) / period));
      const int m_hi = static_cast<int>(std::floor(double(J - diff) / period));
      for (int m = m_lo; m <= m_hi; ++m) sum += potential.coefficient(diff + period * m);
      a(r, c) = sum;
    }
  }
  return a;
}

RVector collocation_points(std::size_t K) {
  RVector x(2 * K);
  for (std::size_t i = 0; i < 2 * K; ++i)
    x[i] = mode_of_index(i, K) * std::numbers::pi / static_cast<double>(K);
  return x;
}

CVector dft_direct(std::span<const Complex> x, int sign) {
  const std::size_t n = x.size();
  CVector roots(n);
  for (std::size_t m = 0; m < n; ++m)
    roots[m] = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(m) / double(n));
  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += x[j] * roots[(j * k) % n];
    out[k] = acc;
  }
  return out;
}

CVector fft_radix2(std::span<const Complex> x, int sign) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_radix2: size must be a power of two");
  CVector a(x.begin(), x.end());
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex w = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(k) / double(len));
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
  return a;
}

namespace {

CVector transform(std::span<const Complex> x, int sign) {
  const std::size_t n = x.size();
  const bool pow2 = n != 0 && (n & (n - 1)) == 0;
  return (n > 128 && pow2) ? fft_radix2(x, sign) : dft_direct(x, sign);
}

}  // namespace

CVector trig_interpolate(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  if (n < 2 || n % 2 != 0) throw DimensionError("trig_interpolate: expected 2K samples");
  CVector q = transform(samples, -1);
  for (auto& z : q) z /= static_cast<double>(n);
  return q;
}

CVector synthesize(std::span<const Complex> coefficients) {
  const std::size_t n = coefficients.size();
  if (n < 2 || n % 2 != 0) throw DimensionError("synthesize: expected 2K coefficients");
  return transform(coefficients, +1);
}

SobolevNorms sobolev_norms(std::span<const Complex> coefficients, double rho) {
  const std::size_t K = coefficients.size() / 2;
  double l2 = 0.0, h1 = 0.0, om = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double j = mode_of_index(i, K);
    const double a = std::norm(coefficients[i]);
    l2 += a;
    h1 += (1.0 + j * j) * a;
    om += (j * j + rho) * a;
  }
  return {std::sqrt(l2), std::sqrt(h1), std::sqrt(om)};
}

double operator_norm_ratio(std::size_t K, const PotentialSpec& potential) {
  const double v = potential.h1_norm();
  if (!(v > 0.0)) throw std::invalid_argument("operator_norm_ratio: zero potential");
  return hermitian_spectral_norm(potential_matrix(K, potential)) / v;
}

WaveProblem WaveProblem::from_functions(std::size_t K, double rho, PotentialSpec potential,
                                        const std::function<Complex(double)>& u0,
                                        const std::function<Complex(double)>& v0) {
  const RVector x = collocation_points(K);
  CVector us(x.size()), vs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    us[i] = u0(x[i]);
    vs[i] = v0(x[i]);
  }
  WaveProblem p;
  p.K = K;
  p.rho = rho;
  p.potential = std::move(potential);
  p.u0 = trig_interpolate(us);
  p.v0 = trig_interpolate(vs);
  return p;
}

void WaveProblem::validate() const {
  if (K == 0) throw std::invalid_argument("wave problem: K must be >= 1");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("wave problem: rho must be >= 0");
  if (u0.size() != 2 * K || v0.size() != 2 * K)
    throw DimensionError("wave problem: initial data must have 2K coefficients");
}

BuiltSystem build_system(const WaveProblem& problem) {
  problem.validate();
  OscillatorSystem sys(frequencies(problem.K, problem.rho), potential_matrix(problem.K, problem.potential));
  return {std::move(sys), State{problem.u0, problem.v0, 0.0}};
}

std::string RhoCertificate::regime() const {
  if (refused) return "refused: " + diagnostic;
  if (direct_condition) return "certified: |H_n - H_0| <= C h for all n";
  return "not certified: drift bounded only while ||q_n|| stays bounded";
}

RhoCertificate rho_certificate(const WaveProblem& problem, const FilterPair& fp, double c2_estimate) {
  problem.validate();
  RhoCertificate cert;
  const double c0sq = fp.c0 * fp.c0;
  cert.potential_h1 = problem.potential.h1_norm();
  cert.a_norm = hermitian_spectral_norm(potential_matrix(problem.K, problem.potential));
  cert.omega_min = std::sqrt(problem.rho);
  cert.rho_threshold = 0.5 * c0sq * c2_estimate * cert.potential_h1 + 1.0;
  cert.hypothesis_with_c2 = problem.rho >= cert.rho_threshold;
  cert.omega_threshold = 0.5 * c0sq * cert.a_norm + 1.0;
  cert.direct_condition = cert.omega_min >= cert.omega_threshold;
  if (!fp.hl_compliant) {
    cert.refused = true;
    cert.diagnostic = "filter '" + fp.name + "' does not satisfy psi1 = sinc*phi";
  } else if (problem.rho == 0.0) {
    cert.refused = true;
    cert.diagnostic = "rho = 0 gives the zero frequency omega_0 = 0; all frequencies must be nonzero";
  }
  if (cert.refused) {
    cert.hypothesis_with_c2 = false;
    cert.direct_condition = false;
  }
  return cert;
}

}  // namespace oscint::wave
