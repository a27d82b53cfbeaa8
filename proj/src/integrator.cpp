#include "oscint/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscint/errors.hpp"

namespace oscint {

StepWorkspace::StepWorkspace(double step, std::span<const double> w, const FilterPair& fp)
    : h(step), omegas(w.begin(), w.end()) {
  if (!(h != 0.0) || !std::isfinite(h)) throw std::invalid_argument("StepWorkspace: h must be finite and nonzero");
  const std::size_t d = omegas.size();
  cos_h.resize(d);
  sin_h.resize(d);
  h_sinc.resize(d);
  omega_sin_h.resize(d);
  phi.resize(d);
  psi1.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double xi = h * omegas[j];
    cos_h[j] = std::cos(xi);
    sin_h[j] = std::sin(xi);
    h_sinc[j] = h * sinc(xi);
    omega_sin_h[j] = omegas[j] * sin_h[j];
    phi[j] = fp.phi(xi);
    psi1[j] = fp.psi1(xi);
  }
}

bool StepWorkspace::matches(double step, std::span<const double> w) const {
  return step == h && std::equal(w.begin(), w.end(), omegas.begin(), omegas.end());
}

namespace {

void require_match(const OscillatorSystem& sys, const StepWorkspace& ws, const State& s) {
  if (!std::equal(sys.omegas().begin(), sys.omegas().end(), ws.omegas.begin(), ws.omegas.end()))
    throw DimensionError("step: workspace was built for different frequencies");
  if (s.q.size() != sys.dim() || s.qdot.size() != sys.dim())
    throw DimensionError("step: state dimension does not match system");
}

// Ψ₁ g(Φq)
CVector filtered_force(const Nonlinearity& g, const StepWorkspace& ws, std::span<const Complex> q) {
  CVector phi_q(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) phi_q[j] = ws.phi[j] * q[j];
  CVector f = g(phi_q);
  if (f.size() != q.size()) throw DimensionError("nonlinearity returned a vector of wrong size");
  for (std::size_t j = 0; j < q.size(); ++j) f[j] *= ws.psi1[j];
  return f;
}

void kick(double tau, std::span<const Complex> f, std::span<Complex> qdot) {
  for (std::size_t j = 0; j < qdot.size(); ++j) qdot[j] += tau * f[j];
}

void check_finite(const State& s, std::size_t step_index) {
  if (!all_finite(s.q) || !all_finite(s.qdot)) {
    std::ostringstream os;
    os << "non-finite state at step " << step_index;
    throw NumericalBlowup(os.str(), step_index);
  }
}

// Direct form given f_n = Ψ₁g(Φq_n); returns f_{n+1} through f_next.
State direct_with(const Nonlinearity& g, const StepWorkspace& ws, const State& s,
                  std::span<const Complex> f_n, CVector& f_next) {
  const std::size_t d = s.q.size();
  const double h = ws.h;
  State out;
  out.q.resize(d);
  out.qdot.resize(d);
  out.t = s.t + h;
  for (std::size_t j = 0; j < d; ++j) {
    const double c = ws.cos_h[j];
    const double hs = ws.h_sinc[j];
    out.q[j] = c * s.q[j] + hs * s.qdot[j] + 0.5 * h * hs * f_n[j];
  }
  f_next = filtered_force(g, ws, out.q);
  for (std::size_t j = 0; j < d; ++j) {
    const double c = ws.cos_h[j];
    const double ws_j = ws.omega_sin_h[j];
    out.qdot[j] = -ws_j * s.q[j] + c * s.qdot[j] + 0.5 * h * (c * f_n[j] + f_next[j]);
  }
  return out;
}

State splitting_with(const Nonlinearity& g, const StepWorkspace& ws, const State& s,
                     std::span<const Complex> f_n, CVector& f_next) {
  State out = s;
  out.t = s.t + ws.h;
  kick(0.5 * ws.h, f_n, out.qdot);
  rotate(ws, out.q, out.qdot);
  f_next = filtered_force(g, ws, out.q);
  kick(0.5 * ws.h, f_next, out.qdot);
  return out;
}

}  // namespace

void rotate(const StepWorkspace& ws, std::span<Complex> q, std::span<Complex> qdot) {
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double c = ws.cos_h[j];
    const double hs = ws.h_sinc[j];
    const double ws_j = ws.omega_sin_h[j];
    const Complex qj = q[j];
    const Complex pj = qdot[j];
    q[j] = c * qj + hs * pj;
    qdot[j] = -ws_j * qj + c * pj;
  }
}

State step_direct(const OscillatorSystem& sys, const Nonlinearity& g, const StepWorkspace& ws,
                  const State& s) {
  require_match(sys, ws, s);
  const CVector f_n = filtered_force(g, ws, s.q);
  CVector f_next;
  State out = direct_with(g, ws, s, f_n, f_next);
  check_finite(out, 1);
  return out;
}

State step_splitting(const OscillatorSystem& sys, const Nonlinearity& g, const StepWorkspace& ws,
                     const State& s) {
  require_match(sys, ws, s);
  const CVector f_n = filtered_force(g, ws, s.q);
  CVector f_next;
  State out = splitting_with(g, ws, s, f_n, f_next);
  check_finite(out, 1);
  return out;
}

State step(const OscillatorSystem& sys, const Nonlinearity& g, const IntegratorConfig& cfg,
           const StepWorkspace& ws, const State& s) {
  return cfg.formulation == Formulation::direct ? step_direct(sys, g, ws, s)
                                                : step_splitting(sys, g, ws, s);
}

Trajectory integrate(const OscillatorSystem& sys, const Nonlinearity& g, const IntegratorConfig& cfg,
                     const State& s0, std::size_t n_steps, const IntegrateOptions& options) {
  if (!(cfg.h > 0.0)) throw std::invalid_argument("integrate: h must be > 0");
  Trajectory out;
  out.final = s0;
  out.series.h = cfg.h;
  if (n_steps == 0) return out;

  const StepWorkspace ws(cfg.h, sys.omegas(), cfg.filters);
  require_match(sys, ws, s0);
  const std::size_t stride =
      options.stride != 0 ? options.stride : (sys.dim() <= 16 ? std::size_t{1} : std::size_t{10});
  const bool has_potential = static_cast<bool>(g.potential);

  auto record = [&](std::size_t n, const State& s) {
    if (options.record_series) {
      const double total = has_potential ? energy(sys, g, s) : energy(sys, s);
      out.series.append(n, total, modified_energy_general(sys, g, cfg.filters, cfg.h, s), norm(s.q),
                        norm(sys.omega_times(s.q)), norm(s.qdot));
    }
    if (options.observer) options.observer(n, s);
  };

  State s = s0;
  record(0, s);
  CVector f = filtered_force(g, ws, s.q);
  CVector f_next;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    s = cfg.formulation == Formulation::direct ? direct_with(g, ws, s, f, f_next)
                                               : splitting_with(g, ws, s, f, f_next);
    check_finite(s, n);
    f.swap(f_next);
    if (n % stride == 0 || n == n_steps) record(n, s);
  }
  out.final = std::move(s);
  return out;
}

double step_adjoint_roundtrip(const OscillatorSystem& sys, const Nonlinearity& g,
                              const IntegratorConfig& cfg, const State& s) {
  const StepWorkspace forward(cfg.h, sys.omegas(), cfg.filters);
  const StepWorkspace backward(-cfg.h, sys.omegas(), cfg.filters);
  const State there = step(sys, g, cfg, forward, s);
  const State back = step(sys, g, cfg, backward, there);
  CVector dq(s.q.size());
  CVector dp(s.q.size());
  for (std::size_t j = 0; j < s.q.size(); ++j) {
    dq[j] = back.q[j] - s.q[j];
    dp[j] = back.qdot[j] - s.qdot[j];
  }
  const double scale = std::max(norm(s.q), norm(s.qdot));
  if (scale == 0.0) return std::max(norm(dq), norm(dp));
  return std::max(norm(dq), norm(dp)) / scale;
}

double reversal_defect(const Nonlinearity& g, const StepWorkspace& ws, const State& s_n,
                       const State& s_next) {
  const CVector f_next = filtered_force(g, ws, s_next.q);
  double defect = 0.0;
  for (std::size_t j = 0; j < s_n.q.size(); ++j) {
    const Complex lhs = ws.h_sinc[j] * s_next.qdot[j];
    const Complex rhs = -s_n.q[j] + ws.cos_h[j] * s_next.q[j] + 0.5 * ws.h * ws.h_sinc[j] * f_next[j];
    defect = std::max(defect, std::abs(lhs - rhs));
  }
  return defect;
}

double stoermer_verlet_discrete_energy(const OscillatorSystem& sys, double h,
                                       std::span<const Complex> q_n,
                                       std::span<const Complex> q_next) {
  if (!(h > 0.0)) throw std::invalid_argument("stoermer_verlet_discrete_energy: h must be > 0");
  if (std::any_of(sys.omegas().begin(), sys.omegas().end(), [](double w) { return w != 0.0; }))
    throw PreconditionError("stoermer_verlet_discrete_energy: requires all frequencies to be zero");
  if (q_n.size() != sys.dim() || q_next.size() != sys.dim())
    throw DimensionError("stoermer_verlet_discrete_energy: dimension mismatch");
  CVector diff(q_n.size());
  for (std::size_t j = 0; j < q_n.size(); ++j) diff[j] = (q_next[j] - q_n[j]) / h;
  return 0.5 * norm_squared(diff) + 0.5 * dot(q_next, sys.coupling().apply(q_n)).real();
}

}  // namespace oscint
