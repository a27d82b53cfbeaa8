#pragma once

// Reference solutions for verification. Not part of the runtime library:
// link oscint_oracle only from tests and verification tools.

#include <cstddef>

#include "oscint/linalg.hpp"
#include "oscint/system.hpp"

namespace oscint::oracle {

/// Exact flow of q̈ = -(Ω² + A)q through the eigendecomposition of M = Ω² + A.
class ExactPropagator {
 public:
  explicit ExactPropagator(const OscillatorSystem& sys);

  State operator()(const State& s0, double t) const;

  const RVector& eigenvalues() const { return eig_.values; }
  const CMatrix& eigenvectors() const { return eig_.vectors; }
  /// ||V diag(λ) V* - M||_F / ||M||_F
  double reconstruction_residual() const { return residual_; }

 private:
  HermitianEigen eig_;
  double residual_ = 0.0;
};

State exact_solution(const OscillatorSystem& sys, const State& s0, double t);

/// cos(t√λ) and sin(t√λ)/(t√λ) as entire functions of x = λt² (cosh/sinh for x < 0).
struct EvenPair {
  double c;
  double s;
};
EvenPair even_cos_sinc(double x);

struct BruteForceResult {
  State state;
  double error_estimate = 0.0;  // Richardson estimate from step halving
  std::size_t substeps = 0;
  bool converged = false;
};

/// Classical RK4 on the first-order form of q̈ = -Ω²q + g(q). Starts from
/// n_substeps and doubles until the estimate ≤ tolerance or max_substeps.
BruteForceResult brute_force(const OscillatorSystem& sys, const Nonlinearity& g, const State& s0,
                             double t, std::size_t n_substeps, double tolerance = 1e-12,
                             std::size_t max_substeps = std::size_t{1} << 22);

/// Fixed-step RK4 without error control.
State rk4(const OscillatorSystem& sys, const Nonlinearity& g, const State& s0, double t,
          std::size_t n_substeps);

}  // namespace oscint::oracle
