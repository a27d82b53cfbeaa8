#include "oscint/system.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "oscint/errors.hpp"

namespace oscint {

namespace {

void require_dim(const OscillatorSystem& sys, const State& s, const char* where) {
  if (s.q.size() != sys.dim() || s.qdot.size() != sys.dim()) {
    std::ostringstream os;
    os << where << ": state dimension (" << s.q.size() << ", " << s.qdot.size()
       << ") does not match system dimension " << sys.dim();
    throw DimensionError(os.str());
  }
}

double half_oscillatory_norm(const OscillatorSystem& sys, const State& s) {
  double acc = 0.0;
  for (std::size_t j = 0; j < sys.dim(); ++j)
    acc += sys.omegas()[j] * sys.omegas()[j] * std::norm(s.q[j]) + std::norm(s.qdot[j]);
  return 0.5 * acc;
}

CVector filtered(const FilterFunction& f, double h, const RVector& omegas,
                 std::span<const Complex> v) {
  return apply_filter(f, h, omegas, v);
}

}  // namespace

OscillatorSystem::OscillatorSystem(RVector omegas, CMatrix coupling)
    : omegas_(std::move(omegas)), coupling_(std::move(coupling)) {
  if (coupling_.size() != omegas_.size()) {
    std::ostringstream os;
    os << "OscillatorSystem: coupling is " << coupling_.size() << "x" << coupling_.size()
       << " but there are " << omegas_.size() << " frequencies";
    throw DimensionError(os.str());
  }
  for (std::size_t j = 0; j < omegas_.size(); ++j) {
    if (!(omegas_[j] >= 0.0) || !std::isfinite(omegas_[j])) {
      std::ostringstream os;
      os << "OscillatorSystem: frequency " << j << " must be finite and >= 0, got " << omegas_[j];
      throw std::invalid_argument(os.str());
    }
  }
  const double scale = coupling_.max_abs();
  input_asymmetry_ = coupling_.hermitian_defect();
  if (input_asymmetry_ > 1e-10 * scale) {
    std::cerr << "warning: coupling matrix is not self-adjoint (max |A_jl - conj(A_lj)| = "
              << input_asymmetry_ << ", max|A| = " << scale << "); using (A + A*)/2\n";
  }
  const std::size_t n = coupling_.size();
  for (std::size_t i = 0; i < n; ++i) {
    coupling_(i, i) = coupling_(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (coupling_(i, j) + std::conj(coupling_(j, i)));
      coupling_(i, j) = avg;
      coupling_(j, i) = std::conj(avg);
    }
  }
}

OscillatorSystem::OscillatorSystem(RVector omegas)
    : OscillatorSystem(omegas, CMatrix(omegas.size())) {}

double OscillatorSystem::smallest_nonzero_frequency() const {
  double w = std::numeric_limits<double>::infinity();
  for (double x : omegas_)
    if (x > 0.0) w = std::min(w, x);
  return w;
}

bool OscillatorSystem::has_zero_frequency() const {
  return std::any_of(omegas_.begin(), omegas_.end(), [](double x) { return x == 0.0; });
}

CVector OscillatorSystem::omega_times(std::span<const Complex> q) const {
  if (q.size() != dim()) throw DimensionError("omega_times: dimension mismatch");
  CVector r(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) r[j] = omegas_[j] * q[j];
  return r;
}

Nonlinearity zero_force() {
  Nonlinearity g;
  g.force = [](std::span<const Complex> q) { return CVector(q.size()); };
  g.potential = [](std::span<const Complex>) { return 0.0; };
  g.label = "zero";
  g.is_zero = true;
  return g;
}

Nonlinearity linear_force(const OscillatorSystem& sys) {
  Nonlinearity g;
  g.force = [a = sys.coupling()](std::span<const Complex> q) {
    CVector r = a.apply(q);
    for (auto& z : r) z = -z;
    return r;
  };
  g.potential = [a = sys.coupling()](std::span<const Complex> q) {
    return 0.5 * dot(q, a.apply(q)).real();
  };
  g.label = "linear";
  g.is_zero = sys.coupling().is_zero();
  return g;
}

Nonlinearity cubic_force() {
  Nonlinearity g;
  g.force = [](std::span<const Complex> q) {
    CVector r(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) r[j] = -std::norm(q[j]) * q[j];
    return r;
  };
  g.potential = [](std::span<const Complex> q) {
    double u = 0.0;
    for (const auto& z : q) u += std::norm(z) * std::norm(z);
    return 0.25 * u;
  };
  g.label = "cubic";
  return g;
}

double energy(const OscillatorSystem& sys, const State& s) {
  require_dim(sys, s, "energy");
  const CVector aq = sys.coupling().apply(s.q);
  return half_oscillatory_norm(sys, s) + 0.5 * dot(s.q, aq).real();
}

double energy(const OscillatorSystem& sys, const Nonlinearity& g, const State& s) {
  require_dim(sys, s, "energy");
  if (!g.potential) throw PreconditionError("energy: nonlinearity '" + g.label + "' has no potential");
  return half_oscillatory_norm(sys, s) + g.potential(s.q);
}

double modified_energy(const OscillatorSystem& sys, const FilterPair& fp, double h,
                       const State& s) {
  require_dim(sys, s, "modified_energy");
  if (!(h > 0.0)) throw std::invalid_argument("modified_energy: h must be > 0");
  const auto& w = sys.omegas();
  const CVector phi_q = filtered(fp.phi, h, w, s.q);
  const CVector a_phi_q = sys.coupling().apply(phi_q);
  double mixed = 0.0;
  double filtered_force = 0.0;
  for (std::size_t j = 0; j < sys.dim(); ++j) {
    const double c = std::cos(h * w[j]);
    mixed += (std::conj(c * phi_q[j]) * a_phi_q[j]).real();
    filtered_force += std::norm(fp.psi1(h * w[j]) * a_phi_q[j]);
  }
  return half_oscillatory_norm(sys, s) + 0.5 * mixed - 0.125 * h * h * filtered_force;
}

double modified_energy_general(const OscillatorSystem& sys, const Nonlinearity& g,
                               const FilterPair& fp, double h, const State& s) {
  require_dim(sys, s, "modified_energy_general");
  if (!(h > 0.0)) throw std::invalid_argument("modified_energy_general: h must be > 0");
  const auto& w = sys.omegas();
  const CVector phi_q = filtered(fp.phi, h, w, s.q);
  const CVector g_phi_q = g(phi_q);
  if (g_phi_q.size() != sys.dim()) throw DimensionError("modified_energy_general: force dimension");
  double mixed = 0.0;
  double filtered_force = 0.0;
  for (std::size_t j = 0; j < sys.dim(); ++j) {
    const double c = std::cos(h * w[j]);
    mixed += (std::conj(c * phi_q[j]) * g_phi_q[j]).real();
    filtered_force += std::norm(fp.psi1(h * w[j]) * g_phi_q[j]);
  }
  return half_oscillatory_norm(sys, s) - 0.5 * mixed - 0.125 * h * h * filtered_force;
}

ExchangeDefect exchange_defect(const OscillatorSystem& sys, const Nonlinearity& g,
                               const FilterPair& fp, double h, const State& s_n,
                               const State& s_next) {
  require_dim(sys, s_n, "exchange_defect");
  require_dim(sys, s_next, "exchange_defect");
  const auto& w = sys.omegas();
  const CVector phi_qn = filtered(fp.phi, h, w, s_n.q);
  const CVector phi_qnext = filtered(fp.phi, h, w, s_next.q);

  ExchangeDefect r;
  r.forward_term = dot(phi_qn, g(phi_qnext));
  r.backward_term = dot(phi_qnext, g(phi_qn));
  r.lhs = modified_energy_general(sys, g, fp, h, s_next) + 0.5 * r.forward_term.real();
  r.rhs = modified_energy_general(sys, g, fp, h, s_n) + 0.5 * r.backward_term.real();
  r.defect = std::abs(r.lhs - r.rhs);
  r.scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  return r;
}

double BoundConstants::min_h_inverse_omega(double h) const {
  return std::min(h, 1.0 / omega_min_nonzero);
}

BoundConstants bound_constants(double a_norm, double omega_min_nonzero, const FilterPair& fp) {
  const double c0 = fp.c0;
  const double c1 = fp.c1;
  BoundConstants bc;
  bc.a_norm = a_norm;
  bc.omega_min_nonzero = omega_min_nonzero;
  bc.c_breve = 0.5 * c0 * c0 * a_norm;
  bc.c_hat = 0.125 * c0 * c0 * c0 * c0 * a_norm * a_norm;
  bc.c_tilde = 0.5 * (2.0 * c0 * c0 + (c0 + 1.0) * std::max(c0 + 1.0, c1)) * a_norm;
  return bc;
}

BoundConstants bound_constants(const OscillatorSystem& sys, const FilterPair& fp) {
  return bound_constants(hermitian_spectral_norm(sys.coupling()), sys.smallest_nonzero_frequency(),
                         fp);
}

double drift_scale(const OscillatorSystem& sys, const BoundConstants& bc, double h, const State& s0) {
  return 0.5 * norm_squared(sys.omega_times(s0.q)) + 0.5 * norm_squared(s0.qdot) +
         (bc.c_breve + bc.c_hat * h * h) * norm_squared(s0.q);
}

ClosenessReport closeness_check(const OscillatorSystem& sys, const FilterPair& fp, double h,
                                const State& s) {
  return closeness_check(sys, fp, bound_constants(sys, fp), h, s);
}

ClosenessReport closeness_check(const OscillatorSystem& sys, const FilterPair& fp,
                                const BoundConstants& bc, double h, const State& s) {
  const double modified = modified_energy(sys, fp, h, s);
  const double total = energy(sys, s);
  const double quadratic = half_oscillatory_norm(sys, s);
  const double q2 = norm_squared(s.q);
  const double q_norm = std::sqrt(q2);
  const double omega_q_norm = norm(sys.omega_times(s.q));

  const double bound_quadratic = (bc.c_breve + bc.c_hat * h * h) * q2;
  const double bound_energy =
      bc.c_tilde * bc.min_h_inverse_omega(h) * q_norm * omega_q_norm + bc.c_hat * h * h * q2;

  ClosenessReport r;
  r.slack_quadratic = bound_quadratic - std::abs(modified - quadratic);
  r.slack_energy = bound_energy - std::abs(modified - total);
  r.scale = std::max({std::abs(modified), std::abs(total), quadratic, bound_quadratic,
                      bound_energy, bc.a_norm * q2});
  r.quadratic_ok = r.slack_quadratic >= -1e-12 * r.scale;
  r.energy_ok = r.slack_energy >= -1e-12 * r.scale;
  r.advisory = h > 1.0;
  return r;
}

double regularity_bound(const OscillatorSystem& sys, const FilterPair& fp, double h,
                        const State& s0, double qn_norm) {
  if (!fp.hl_compliant)
    throw PreconditionError("regularity_bound: filter '" + fp.name +
                            "' does not satisfy psi1 = sinc*phi");
  return regularity_bound(fp, bound_constants(sys, fp), h, sys, s0, qn_norm);
}

double regularity_bound(const FilterPair& fp, const BoundConstants& bc, double h,
                        const OscillatorSystem& sys, const State& s0, double qn_norm) {
  if (!fp.hl_compliant)
    throw PreconditionError("regularity_bound: filter '" + fp.name +
                            "' does not satisfy psi1 = sinc*phi");
  require_dim(sys, s0, "regularity_bound");
  const double rhs = 2.0 * half_oscillatory_norm(sys, s0) +
                     2.0 * (bc.c_breve + bc.c_hat * h * h) * (norm_squared(s0.q) + qn_norm * qn_norm);
  return std::sqrt(rhs);
}

DriftBoundReport drift_bound_check(const OscillatorSystem& sys, const FilterPair& fp, double h,
                                   const EnergySeries& series) {
  if (!fp.hl_compliant)
    throw PreconditionError("drift_bound_check: filter '" + fp.name +
                            "' does not satisfy psi1 = sinc*phi (hypothesis unmet)");
  return drift_bound_check(fp, bound_constants(sys, fp), h, series);
}

DriftBoundReport drift_bound_check(const FilterPair& fp, const BoundConstants& bc, double h,
                                   const EnergySeries& series) {
  if (!fp.hl_compliant)
    throw PreconditionError("drift_bound_check: filter '" + fp.name +
                            "' does not satisfy psi1 = sinc*phi (hypothesis unmet)");
  if (series.empty() || series.step.front() != 0)
    throw PreconditionError("drift_bound_check: series must start at step 0");

  const double m = bc.min_h_inverse_omega(h);
  const double q0 = series.q_norm.front();
  const double wq0 = series.omega_q_norm.front();
  DriftBoundReport r;
  r.advisory = h > 1.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double qn = series.q_norm[i];
    const double wqn = series.omega_q_norm[i];
    const double drift = std::abs(series.drift_energy[i]);
    const double bound = bc.c_tilde * m * (qn * wqn + q0 * wq0) + bc.c_hat * h * h * (qn * qn + q0 * q0);
    const double slack = bound - drift;
    r.max_drift = std::max(r.max_drift, drift);
    r.scale = std::max({r.scale, std::abs(series.energy[i]),
                        0.5 * (wqn * wqn + series.qdot_norm[i] * series.qdot_norm[i]),
                        bc.a_norm * qn * qn});
    if (slack < r.worst_slack) {
      r.worst_slack = slack;
      r.worst_step = series.step[i];
    }
  }
  r.ok = r.worst_slack >= -1e-10 * r.scale;
  return r;
}

UnconditionalCertificate unconditional_bound_check(const OscillatorSystem& sys,
                                                   const FilterPair& fp, double h,
                                                   const State& s0) {
  require_dim(sys, s0, "unconditional_bound_check");
  UnconditionalCertificate cert;
  cert.advisory = h > 1.0;
  cert.constants = bound_constants(sys, fp);
  const auto& bc = cert.constants;
  cert.omega_threshold = 0.5 * fp.c0 * fp.c0 * bc.a_norm + 1.0;
  const auto& w = sys.omegas();
  cert.omega_min = w.empty() ? 0.0 : *std::min_element(w.begin(), w.end());

  if (!fp.hl_compliant) {
    cert.diagnostic = "filter '" + fp.name + "' does not satisfy psi1 = sinc*phi";
    return cert;
  }
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0) {
      std::ostringstream os;
      os << "zero frequency at index " << j << ": all omega_j must be nonzero";
      cert.diagnostic = os.str();
      return cert;
    }
  }
  if (cert.omega_min < cert.omega_threshold) {
    std::ostringstream os;
    os.precision(17);
    os << "smallest frequency " << cert.omega_min << " is below the threshold 1/2 c0^2 ||A|| + 1 = "
       << cert.omega_threshold;
    cert.diagnostic = os.str();
    return cert;
  }

  cert.issued = true;
  cert.modified_energy0 = modified_energy(sys, fp, h, s0);
  const double e0 = std::abs(cert.modified_energy0);
  cert.q_norm_ceiling = std::sqrt(2.0 * e0);
  cert.omega_q_norm_ceiling = regularity_bound(fp, bc, h, sys, s0, cert.q_norm_ceiling);
  const double q0 = norm(s0.q);
  const double wq0 = norm(sys.omega_times(s0.q));
  cert.drift_ceiling =
      bc.c_tilde * bc.min_h_inverse_omega(h) * (cert.q_norm_ceiling * cert.omega_q_norm_ceiling + q0 * wq0) +
      bc.c_hat * h * h * (cert.q_norm_ceiling * cert.q_norm_ceiling + q0 * q0);
  return cert;
}

UnconditionalAudit audit_unconditional(const UnconditionalCertificate& cert,
                                       const EnergySeries& series) {
  if (!cert.issued)
    throw PreconditionError("audit_unconditional: certificate not issued: " + cert.diagnostic);
  UnconditionalAudit a;
  const double e0 = std::abs(cert.modified_energy0);
  a.scale = e0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double qn = series.q_norm[i];
    const double pn = series.qdot_norm[i];
    a.worst_energy_slack = std::min(a.worst_energy_slack, e0 - 0.5 * (qn * qn + pn * pn));
    a.worst_drift_slack =
        std::min(a.worst_drift_slack, cert.drift_ceiling - std::abs(series.drift_energy[i]));
    a.scale = std::max(a.scale, std::abs(series.energy[i]));
  }
  a.ok = a.worst_energy_slack >= -1e-10 * a.scale && a.worst_drift_slack >= -1e-10 * a.scale;
  return a;
}

}  // namespace oscint
