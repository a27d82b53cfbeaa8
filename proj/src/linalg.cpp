#include "oscint/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oscint/errors.hpp"

namespace oscint {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double CMatrix::max_abs() const {
  double r = 0.0;
  for (const auto& z : data_) r = std::max(r, std::abs(z));
  return r;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::hermitian_defect() const {
  double r = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      r = std::max(r, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return r;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

bool CMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) { return z == 0.0; });
}

CVector CMatrix::apply(std::span<const Complex> v) const {
  CVector out(n_);
  apply_into(v, out);
  return out;
}

void CMatrix::apply_into(std::span<const Complex> v, std::span<Complex> out) const {
  if (v.size() != n_ || out.size() != n_) throw DimensionError("matrix-vector size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const Complex* r = data_.data() + i * n_;
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += r[j] * v[j];
    out[i] = acc;
  }
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.n_ != b.n_) throw DimensionError("matrix product size mismatch");
  const std::size_t n = a.n_;
  CMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.n_ != b.n_) throw DimensionError("matrix difference size mismatch");
  CMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
  return r;
}

CMatrix operator*(double s, const CMatrix& a) {
  CMatrix r = a;
  for (auto& z : r.data_) z *= s;
  return r;
}

double norm_squared(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

double norm(std::span<const Complex> v) { return std::sqrt(norm_squared(v)); }

double max_abs(std::span<const Complex> v) {
  double r = 0.0;
  for (const auto& z : v) r = std::max(r, std::abs(z));
  return r;
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw DimensionError("inner product size mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

bool all_finite(std::span<const Complex> v) {
  return std::all_of(v.begin(), v.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

namespace {

double off_diagonal_frobenius(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

// Annihilates m(p,q) with the unitary V = diag(1, conj(u)) G, where
// u = m(p,q)/|m(p,q)| and G is the real Jacobi rotation of the phase-free block.
void rotate(CMatrix& m, CMatrix& vecs, std::size_t p, std::size_t q) {
  const Complex z = m(p, q);
  const double r = std::abs(z);
  if (r == 0.0) return;
  const Complex u = z / r;
  const double app = m(p, p).real();
  const double aqq = m(q, q).real();

  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
  const double c = 1.0 / std::hypot(t, 1.0);
  const double s = t * c;

  const Complex vpp = c;
  const Complex vpq = s;
  const Complex vqp = -s * std::conj(u);
  const Complex vqq = c * std::conj(u);

  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex mkp = m(k, p);
    const Complex mkq = m(k, q);
    m(k, p) = mkp * vpp + mkq * vqp;
    m(k, q) = mkp * vpq + mkq * vqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex mpk = m(p, k);
    const Complex mqk = m(q, k);
    m(p, k) = std::conj(vpp) * mpk + std::conj(vqp) * mqk;
    m(q, k) = std::conj(vpq) * mpk + std::conj(vqq) * mqk;
  }
  m(p, q) = 0.0;
  m(q, p) = 0.0;
  m(p, p) = app - t * r;
  m(q, q) = aqq + t * r;

  for (std::size_t k = 0; k < n; ++k) {
    const Complex ekp = vecs(k, p);
    const Complex ekq = vecs(k, q);
    vecs(k, p) = ekp * vpp + ekq * vqp;
    vecs(k, q) = ekp * vpq + ekq * vqq;
  }
}

}  // namespace

HermitianEigen hermitian_eig(const CMatrix& input) {
  constexpr int kMaxSweeps = 100;
  const std::size_t n = input.size();
  const double scale = input.max_abs();
  if (input.hermitian_defect() > 1e-12 * scale) {
    std::ostringstream os;
    os << "hermitian_eig: input is not Hermitian (defect " << input.hermitian_defect() << ")";
    throw DimensionError(os.str());
  }

  CMatrix m = input;
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }

  HermitianEigen out;
  out.vectors = CMatrix::identity(n);
  const double threshold = 1e-14 * m.frobenius();

  int sweep = 0;
  double off = off_diagonal_frobenius(m);
  while (off > threshold) {
    if (sweep == kMaxSweeps) {
      throw EigenError("hermitian_eig: no convergence after 100 sweeps", off);
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(m, out.vectors, p, q);
    off = off_diagonal_frobenius(m);
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m(a, a).real() < m(b, b).real(); });
  out.values.resize(n);
  CMatrix sorted(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = m(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) sorted(i, k) = out.vectors(i, order[k]);
  }
  out.vectors = std::move(sorted);
  return out;
}

double hermitian_spectral_norm(const CMatrix& m) {
  if (m.size() == 0 || m.is_zero()) return 0.0;
  const auto eig = hermitian_eig(m);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

}  // namespace oscint
