#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "oscint/filters.hpp"
#include "oscint/linalg.hpp"
#include "oscint/series.hpp"

namespace oscint {

/// q̈ = -Ω²q - Aq with Ω = diag(omegas) and A self-adjoint.
///
/// The coupling is replaced by (A + A*)/2 at construction. An asymmetry above
/// 1e-10 max|A| is reported on stderr, since any skew part turns the exactly
/// conserved modified energy into a slowly drifting one.
class OscillatorSystem {
 public:
  OscillatorSystem(RVector omegas, CMatrix coupling);
  /// A = 0
  explicit OscillatorSystem(RVector omegas);

  std::size_t dim() const { return omegas_.size(); }
  const RVector& omegas() const { return omegas_; }
  const CMatrix& coupling() const { return coupling_; }
  double input_asymmetry() const { return input_asymmetry_; }

  /// Smallest nonzero frequency; +inf when every ω_j is zero.
  double smallest_nonzero_frequency() const;
  bool has_zero_frequency() const;

  CVector omega_times(std::span<const Complex> q) const;

 private:
  RVector omegas_;
  CMatrix coupling_;
  double input_asymmetry_ = 0.0;
};

struct State {
  CVector q;
  CVector qdot;
  double t = 0.0;
};

/// Force g = -∇U with an optional potential U (∇ = ∇_x + i∇_y).
struct Nonlinearity {
  std::function<CVector(std::span<const Complex>)> force;
  std::function<double(std::span<const Complex>)> potential;  // may be empty
  std::string label;
  bool is_zero = false;

  CVector operator()(std::span<const Complex> q) const { return force(q); }
};

Nonlinearity zero_force();
/// g(q) = -Aq, U(q) = ½ Re(q*Aq)
Nonlinearity linear_force(const OscillatorSystem& sys);
/// g(q)_j = -|q_j|²q_j, U(q) = ¼ Σ|q_j|⁴
Nonlinearity cubic_force();

/// H = ½||Ωq||² + ½||q̇||² + ½ Re(q*Aq)
double energy(const OscillatorSystem& sys, const State& s);
/// ½||Ωq||² + ½||q̇||² + U(q); the potential must be present.
double energy(const OscillatorSystem& sys, const Nonlinearity& g, const State& s);

/// The modified energy conserved by compliant integrators in the linear case:
/// ½||Ωq||² + ½||q̇||² + ½ Re((cos(hΩ)Φq)* AΦq) - ⅛h²||Ψ₁AΦq||²
double modified_energy(const OscillatorSystem& sys, const FilterPair& fp, double h,
                       const State& s);

/// Same functional with -Aq replaced by a general force g:
/// ½||Ωq||² + ½||q̇||² - ½ Re((cos(hΩ)Φq)* g(Φq)) - ⅛h²||Ψ₁g(Φq)||²
double modified_energy_general(const OscillatorSystem& sys, const Nonlinearity& g,
                               const FilterPair& fp, double h, const State& s);

/// Both sides of the two-step exchange identity
///   𝓗(n+1) + ½Re((Φq_n)* g(Φq_{n+1})) = 𝓗(n) + ½Re((Φq_{n+1})* g(Φq_n)).
struct ExchangeDefect {
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;  // |lhs - rhs|
  double scale = 0.0;   // max(|lhs|, |rhs|)
  Complex forward_term;   // (Φq_n)* g(Φq_{n+1})
  Complex backward_term;  // (Φq_{n+1})* g(Φq_n)
};

ExchangeDefect exchange_defect(const OscillatorSystem& sys, const Nonlinearity& g,
                               const FilterPair& fp, double h, const State& s_n,
                               const State& s_next);

struct BoundConstants {
  double c_breve = 0.0;  // ½c0²||A||
  double c_hat = 0.0;    // ⅛c0⁴||A||²
  double c_tilde = 0.0;  // ½(2c0² + (c0+1)max(c0+1, c1))||A||
  double omega_min_nonzero = std::numeric_limits<double>::infinity();
  double a_norm = 0.0;

  /// min(h, 1/ω) with 1/∞ = 0
  double min_h_inverse_omega(double h) const;
};

BoundConstants bound_constants(const OscillatorSystem& sys, const FilterPair& fp);
/// Same constants for an already known ||A||.
BoundConstants bound_constants(double a_norm, double omega_min_nonzero, const FilterPair& fp);

/// Size of the terms of the modified energy at s0, used to make drifts relative:
/// ½||Ωq0||² + ½||q̇0||² + (C̆ + Ĉh²)||q0||². Unlike |𝓗0| it does not shrink
/// through cancellation between the terms.
double drift_scale(const OscillatorSystem& sys, const BoundConstants& bc, double h, const State& s0);

struct ClosenessReport {
  // |𝓗 - ½||Ωq||² - ½||q̇||²| ≤ (C̆ + Ĉh²)||q||²
  double slack_quadratic = 0.0;
  // |𝓗 - H| ≤ C̃ min(h, 1/ω)||q|| ||Ωq|| + Ĉh²||q||²
  double slack_energy = 0.0;
  double scale = 0.0;
  bool quadratic_ok = false;
  bool energy_ok = false;
  /// h > 1: outside the standing assumption, verdict is informational.
  bool advisory = false;

  bool ok() const { return quadratic_ok && energy_ok; }
};

/// Both closeness inequalities; a slack counts as satisfied when ≥ -1e-12·scale.
ClosenessReport closeness_check(const OscillatorSystem& sys, const FilterPair& fp, double h,
                                const State& s);
ClosenessReport closeness_check(const OscillatorSystem& sys, const FilterPair& fp,
                                const BoundConstants& bc, double h, const State& s);

/// √(||Ωq0||² + ||q̇0||² + 2(C̆ + Ĉh²)(||q0||² + qn_norm²)), an upper bound for
/// √(||Ωq_n||² + ||q̇_n||²) whenever ||q_n|| ≤ qn_norm.
/// Throws PreconditionError for a non-compliant pair.
double regularity_bound(const OscillatorSystem& sys, const FilterPair& fp, double h,
                        const State& s0, double qn_norm);
double regularity_bound(const FilterPair& fp, const BoundConstants& bc, double h,
                        const OscillatorSystem& sys, const State& s0, double qn_norm);

/// Audit of |H_n - H_0| ≤ C̃ min(h,1/ω)(||q_n|| ||Ωq_n|| + ||q_0|| ||Ωq_0||)
///                      + Ĉh²(||q_n||² + ||q_0||²) over every recorded row.
struct DriftBoundReport {
  double worst_slack = std::numeric_limits<double>::infinity();
  std::size_t worst_step = 0;
  double max_drift = 0.0;
  double scale = 0.0;
  bool ok = false;  // worst_slack ≥ -1e-10·scale
  bool advisory = false;
};

/// Throws PreconditionError for a non-compliant pair or a series without row 0.
DriftBoundReport drift_bound_check(const OscillatorSystem& sys, const FilterPair& fp, double h,
                                   const EnergySeries& series);
DriftBoundReport drift_bound_check(const FilterPair& fp, const BoundConstants& bc, double h,
                                   const EnergySeries& series);

/// A-priori certificate for systems without zero frequencies and
/// ω ≥ ½c0²||A|| + 1: ½||q_n||² + ½||q̇_n||² ≤ |𝓗(q0, q̇0)| for all n, and a
/// drift ceiling that depends on the initial data only.
struct UnconditionalCertificate {
  bool issued = false;
  std::string diagnostic;  // reason when refused
  bool advisory = false;
  double omega_threshold = 0.0;  // ½c0²||A|| + 1
  double omega_min = 0.0;
  double modified_energy0 = 0.0;
  double q_norm_ceiling = 0.0;        // √(2|𝓗0|)
  double omega_q_norm_ceiling = 0.0;  // via the regularity bound
  double drift_ceiling = 0.0;
  BoundConstants constants;
};

UnconditionalCertificate unconditional_bound_check(const OscillatorSystem& sys,
                                                   const FilterPair& fp, double h,
                                                   const State& s0);

struct UnconditionalAudit {
  double worst_energy_slack = std::numeric_limits<double>::infinity();  // |𝓗0| - ½(||q||²+||q̇||²)
  double worst_drift_slack = std::numeric_limits<double>::infinity();   // ceiling - |H_n - H_0|
  double scale = 0.0;
  bool ok = false;  // both slacks ≥ -1e-10·scale
};

/// Throws PreconditionError if the certificate was not issued.
UnconditionalAudit audit_unconditional(const UnconditionalCertificate& cert,
                                       const EnergySeries& series);

}  // namespace oscint
