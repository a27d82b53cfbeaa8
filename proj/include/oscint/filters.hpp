#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oscint/linalg.hpp"

namespace oscint {

/// Below this |ξ| sinc switches to its even Taylor polynomial.
inline constexpr double kSincSeriesThreshold = 1e-4;

/// sin(ξ)/ξ, continued by 1 at the origin.
double sinc(double xi);

/// An even real filter symbol evaluated at ξ = hω.
struct FilterFunction {
  std::function<double(double)> evaluate;
  std::string label;

  double operator()(double xi) const { return evaluate(xi); }
};

/// Filter pair (φ, ψ₁) with bound constants |φ|,|ψ₁| ≤ c0 and |φ(ξ)-1| ≤ c1|ξ|.
struct FilterPair {
  std::string name;
  FilterFunction phi;
  FilterFunction psi1;
  double c0 = 1.0;
  double c1 = 0.0;
  /// ψ₁ = sinc·φ holds identically.
  bool hl_compliant = false;
};

/// The named pairs: deuflhard, hairer-lubich, gautschi, unfiltered.
const std::vector<FilterPair>& catalog();

/// Throws std::invalid_argument listing the valid names on a miss.
const FilterPair& find_filter(const std::string& name);

/// Builds a compliant pair from φ alone; ψ₁ := sinc·φ.
FilterPair make_compliant_pair(std::string name, FilterFunction phi, double c0, double c1);

/// out_j = f(h ω_j) v_j
CVector apply_filter(const FilterFunction& f, double h, std::span<const double> omegas,
                     std::span<const Complex> v);

/// Result of checking the filter bounds on the grid ξ_k = k·max/(points-1).
struct FilterCertificate {
  double c0_margin = 0.0;  // c0 - max(|φ|, |ψ₁|)
  double c1_margin = 0.0;  // min over ξ>0 of c1 - |φ(ξ)-1|/ξ
  double hl_defect = 0.0;  // max |ψ₁ - sinc·φ|·(1+ξ)
  bool ok() const { return c0_margin >= 0.0 && c1_margin >= 0.0; }
};

FilterCertificate certify_filter_bounds(const FilterPair& fp, double xi_max = 1e3,
                                        std::size_t points = 10000);

}  // namespace oscint
