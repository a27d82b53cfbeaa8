#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "oscint/filters.hpp"
#include "oscint/series.hpp"
#include "oscint/system.hpp"

namespace oscint {

enum class Formulation { direct, splitting };

struct IntegratorConfig {
  double h = 0.0;
  FilterPair filters;
  Formulation formulation = Formulation::splitting;

  /// h > 1 runs fine but lies outside the standing assumption of the bounds.
  bool advisory() const { return h > 1.0; }
};

/// Diagonal coefficient vectors for one (h, Ω, filter) combination.
/// h may be negative; this is how the adjoint step is formed.
struct StepWorkspace {
  StepWorkspace(double h, std::span<const double> omegas, const FilterPair& fp);

  double h;
  RVector omegas;
  RVector cos_h;        // cos(hω)
  RVector sin_h;        // sin(hω)
  RVector h_sinc;       // h·sinc(hω)
  RVector omega_sin_h;  // ω·sin(hω), exactly 0 for ω = 0
  RVector phi;          // φ(hω)
  RVector psi1;         // ψ₁(hω)

  bool matches(double step, std::span<const double> w) const;
};

/// One step of q_{n+1} = cos(hΩ)q_n + h sinc(hΩ)q̇_n + ½h² sinc(hΩ)Ψ₁g(Φq_n),
/// q̇_{n+1} = -Ω sin(hΩ)q_n + cos(hΩ)q̇_n + ½h(cos(hΩ)Ψ₁g(Φq_n) + Ψ₁g(Φq_{n+1})).
State step_direct(const OscillatorSystem& sys, const Nonlinearity& g, const StepWorkspace& ws,
                  const State& s);

/// Same step as kick (h/2) - exact rotation (h) - kick (h/2).
State step_splitting(const OscillatorSystem& sys, const Nonlinearity& g, const StepWorkspace& ws,
                     const State& s);

State step(const OscillatorSystem& sys, const Nonlinearity& g, const IntegratorConfig& cfg,
           const StepWorkspace& ws, const State& s);

/// Exact flow of q̈ = -Ω²q over ws.h applied in place.
void rotate(const StepWorkspace& ws, std::span<Complex> q, std::span<Complex> qdot);

struct IntegrateOptions {
  /// Record every `stride` steps (the last step is always recorded).
  /// 0 selects 1 for d ≤ 16 and 10 otherwise.
  std::size_t stride = 0;
  bool record_series = true;
  std::function<void(std::size_t, const State&)> observer;  // called on recorded steps
};

struct Trajectory {
  State final;
  EnergySeries series;
};

/// Applies the configured step n_steps times, reusing g(Φq_{n+1}) as the next
/// step's g(Φq_n). Throws NumericalBlowup naming the first non-finite step.
Trajectory integrate(const OscillatorSystem& sys, const Nonlinearity& g, const IntegratorConfig& cfg,
                     const State& s0, std::size_t n_steps, const IntegrateOptions& options = {});

/// max(||Δq||, ||Δq̇||) / max(||q||, ||q̇||) for step(-h) ∘ step(h).
double step_adjoint_roundtrip(const OscillatorSystem& sys, const Nonlinearity& g,
                              const IntegratorConfig& cfg, const State& s);

/// Defect of h sinc(hΩ)q̇_{n+1} = -q_n + cos(hΩ)q_{n+1} + ½h² sinc(hΩ)Ψ₁g(Φq_{n+1}),
/// as max-abs difference of the two sides.
double reversal_defect(const Nonlinearity& g, const StepWorkspace& ws, const State& s_n,
                       const State& s_next);

/// ½||(q_{n+1} - q_n)/h||² + ½Re(q_{n+1}* A q_n); conserved by the method with
/// Ω = 0, φ = 1, ψ₁ = sinc. Throws PreconditionError if any ω_j ≠ 0.
double stoermer_verlet_discrete_energy(const OscillatorSystem& sys, double h,
                                       std::span<const Complex> q_n,
                                       std::span<const Complex> q_next);

}  // namespace oscint
