#include "oscint/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oscint::oracle {

EvenPair even_cos_sinc(double x) {
  if (x >= 0.0) {
    const double r = std::sqrt(x);
    return {std::cos(r), sinc(r)};
  }
  const double r = std::sqrt(-x);
  if (r < 1e-4) {
    // 1 + r²/6 + r⁴/120
    const double r2 = r * r;
    return {std::cosh(r), 1.0 + r2 / 6.0 + r2 * r2 / 120.0};
  }
  return {std::cosh(r), std::sinh(r) / r};
}

ExactPropagator::ExactPropagator(const OscillatorSystem& sys) {
  const std::size_t d = sys.dim();
  CMatrix m = sys.coupling();
  for (std::size_t j = 0; j < d; ++j) m(j, j) += sys.omegas()[j] * sys.omegas()[j];
  eig_ = hermitian_eig(m);

  CMatrix lv = eig_.vectors;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) lv(i, k) *= eig_.values[k];
  const CMatrix rec = lv * eig_.vectors.adjoint();
  const double mn = m.frobenius();
  residual_ = mn == 0.0 ? (rec - m).frobenius() : (rec - m).frobenius() / mn;
}

State ExactPropagator::operator()(const State& s0, double t) const {
  const std::size_t d = s0.q.size();
  const CMatrix& v = eig_.vectors;
  CVector a(d), b(d);
  for (std::size_t k = 0; k < d; ++k) {
    Complex ak = 0.0, bk = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      ak += std::conj(v(i, k)) * s0.q[i];
      bk += std::conj(v(i, k)) * s0.qdot[i];
    }
    a[k] = ak;
    b[k] = bk;
  }
  CVector qa(d), pa(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lambda = eig_.values[k];
    const auto [c, s] = even_cos_sinc(lambda * t * t);
    qa[k] = c * a[k] + t * s * b[k];
    pa[k] = -lambda * t * s * a[k] + c * b[k];
  }
  State out;
  out.q = v.apply(qa);
  out.qdot = v.apply(pa);
  out.t = s0.t + t;
  return out;
}

State exact_solution(const OscillatorSystem& sys, const State& s0, double t) {
  if (t == 0.0) return s0;
  return ExactPropagator(sys)(s0, t);
}

namespace {

struct Deriv {
  CVector dq;
  CVector dp;
};

Deriv rhs(const OscillatorSystem& sys, const Nonlinearity& g, const CVector& q, const CVector& p) {
  Deriv d{p, g(q)};
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double w = sys.omegas()[j];
    d.dp[j] -= w * w * q[j];
  }
  return d;
}

CVector axpy(const CVector& x, double a, const CVector& y) {
  CVector r(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] + a * y[j];
  return r;
}

double state_distance(const State& a, const State& b) {
  double r = 0.0;
  for (std::size_t j = 0; j < a.q.size(); ++j)
    r = std::max({r, std::abs(a.q[j] - b.q[j]), std::abs(a.qdot[j] - b.qdot[j])});
  return r;
}

}  // namespace

State rk4(const OscillatorSystem& sys, const Nonlinearity& g, const State& s0, double t,
          std::size_t n_substeps) {
  State s = s0;
  if (n_substeps == 0 || t == 0.0) return s;
  const double dt = t / static_cast<double>(n_substeps);
  for (std::size_t n = 0; n < n_substeps; ++n) {
    const Deriv k1 = rhs(sys, g, s.q, s.qdot);
    const Deriv k2 = rhs(sys, g, axpy(s.q, 0.5 * dt, k1.dq), axpy(s.qdot, 0.5 * dt, k1.dp));
    const Deriv k3 = rhs(sys, g, axpy(s.q, 0.5 * dt, k2.dq), axpy(s.qdot, 0.5 * dt, k2.dp));
    const Deriv k4 = rhs(sys, g, axpy(s.q, dt, k3.dq), axpy(s.qdot, dt, k3.dp));
    for (std::size_t j = 0; j < s.q.size(); ++j) {
      s.q[j] += dt / 6.0 * (k1.dq[j] + 2.0 * k2.dq[j] + 2.0 * k3.dq[j] + k4.dq[j]);
      s.qdot[j] += dt / 6.0 * (k1.dp[j] + 2.0 * k2.dp[j] + 2.0 * k3.dp[j] + k4.dp[j]);
    }
  }
  s.t = s0.t + t;
  return s;
}

BruteForceResult brute_force(const OscillatorSystem& sys, const Nonlinearity& g, const State& s0,
                             double t, std::size_t n_substeps, double tolerance,
                             std::size_t max_substeps) {
  BruteForceResult r;
  if (t == 0.0) {
    r.state = s0;
    r.converged = true;
    return r;
  }
  std::size_t n = std::max<std::size_t>(n_substeps, 1);
  State coarse = rk4(sys, g, s0, t, n);
  for (;;) {
    State fine = rk4(sys, g, s0, t, 2 * n);
    r.state = fine;
    r.substeps = 2 * n;
    r.error_estimate = state_distance(fine, coarse) / 15.0;
    r.converged = r.error_estimate <= tolerance;
    if (r.converged || 4 * n > max_substeps) break;
    coarse = std::move(fine);
    n *= 2;
  }
  return r;
}

}  // namespace oscint::oracle
