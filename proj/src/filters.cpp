#include "oscint/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscint/errors.hpp"

namespace oscint {

double sinc(double xi) {
  const double a = std::abs(xi);
  if (a < kSincSeriesThreshold) {
    const double x2 = a * a;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(a) / a;
}

namespace {

FilterFunction one() {
  return {[](double) { return 1.0; }, "1"};
}
FilterFunction sinc_fn() {
  return {[](double xi) { return sinc(xi); }, "sinc"};
}
FilterFunction sinc_squared() {
  return {[](double xi) {
            const double s = sinc(xi);
            return s * s;
          },
          "sinc^2"};
}

std::vector<FilterPair> build_catalog() {
  std::vector<FilterPair> pairs;
  pairs.push_back({"deuflhard", one(), sinc_fn(), 1.0, 0.0, true});
  // sup |sinc(ξ)-1|/|ξ| = 1/π, attained at ξ = π.
  pairs.push_back({"hairer-lubich", sinc_fn(), sinc_squared(), 1.0, 0.32, true});
  pairs.push_back({"gautschi", one(), sinc_squared(), 1.0, 0.0, false});
  pairs.push_back({"unfiltered", one(), one(), 1.0, 0.0, false});
  return pairs;
}

}  // namespace

const std::vector<FilterPair>& catalog() {
  static const std::vector<FilterPair> pairs = build_catalog();
  return pairs;
}

const FilterPair& find_filter(const std::string& name) {
  for (const auto& fp : catalog())
    if (fp.name == name) return fp;
  std::string valid;
  for (const auto& fp : catalog()) valid += (valid.empty() ? "" : "|") + fp.name;
  throw std::invalid_argument("unknown filter '" + name + "' (expected " + valid + ")");
}

FilterPair make_compliant_pair(std::string name, FilterFunction phi, double c0, double c1) {
  FilterFunction psi1{[f = phi.evaluate](double xi) { return sinc(xi) * f(xi); },
                      "sinc*" + phi.label};
  return {std::move(name), std::move(phi), std::move(psi1), c0, c1, true};
}

CVector apply_filter(const FilterFunction& f, double h, std::span<const double> omegas,
                     std::span<const Complex> v) {
  if (omegas.size() != v.size()) throw DimensionError("apply_filter: dimension mismatch");
  CVector out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = f(h * omegas[j]) * v[j];
  return out;
}

FilterCertificate certify_filter_bounds(const FilterPair& fp, double xi_max, std::size_t points) {
  FilterCertificate cert;
  double sup = 0.0;
  double slope = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double xi = xi_max * static_cast<double>(k) / static_cast<double>(points - 1);
    const double phi = fp.phi(xi);
    const double psi = fp.psi1(xi);
    sup = std::max({sup, std::abs(phi), std::abs(psi)});
    if (xi > 0.0) slope = std::max(slope, std::abs(phi - 1.0) / xi);
    cert.hl_defect = std::max(cert.hl_defect, std::abs(psi - sinc(xi) * phi) * (1.0 + xi));
  }
  cert.c0_margin = fp.c0 - sup;
  cert.c1_margin = fp.c1 - slope;
  return cert;
}

}  // namespace oscint
