#include "oscint/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace oscint {

void EnergySeries::append(std::size_t n, double energy_value, double modified_value, double qn,
                          double omega_qn, double qdotn) {
  step.push_back(n);
  t.push_back(static_cast<double>(n) * h);
  energy.push_back(energy_value);
  modified.push_back(modified_value);
  drift_energy.push_back(energy_value - energy.front());
  drift_modified.push_back(modified_value - modified.front());
  q_norm.push_back(qn);
  omega_q_norm.push_back(omega_qn);
  qdot_norm.push_back(qdotn);
}

namespace {
double max_abs_of(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

double EnergySeries::max_abs_drift_energy() const { return max_abs_of(drift_energy); }
double EnergySeries::max_abs_drift_modified() const { return max_abs_of(drift_modified); }

void EnergySeries::validate() const {
  const std::size_t n = step.size();
  for (const auto* col : {&t, &energy, &modified, &drift_energy, &drift_modified, &q_norm,
                          &omega_q_norm, &qdot_norm})
    if (col->size() != n) throw std::logic_error("energy series: ragged columns");
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && step[i] <= step[i - 1])
      throw std::logic_error("energy series: step indices not strictly increasing");
    const double expected = static_cast<double>(step[i]) * h;
    if (std::abs(t[i] - expected) > 1e-12 * std::abs(expected))
      throw std::logic_error("energy series: t != n*h");
  }
}

void write_csv(std::ostream& os, const EnergySeries& s) {
  s.validate();
  os << kSeriesHeader << "\n";
  os << "n,t,H,H_mod,drift_H,drift_mod,norm_q,norm_omega_q,norm_qdot\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << s.step[i] << ',' << fmt17(s.t[i]) << ',' << fmt17(s.energy[i]) << ','
       << fmt17(s.modified[i]) << ',' << fmt17(s.drift_energy[i]) << ','
       << fmt17(s.drift_modified[i]) << ',' << fmt17(s.q_norm[i]) << ','
       << fmt17(s.omega_q_norm[i]) << ',' << fmt17(s.qdot_norm[i]) << '\n';
  }
}

std::string to_csv(const EnergySeries& series) {
  std::ostringstream os;
  write_csv(os, series);
  return os.str();
}

void write_json(std::ostream& os, const EnergySeries& s) {
  s.validate();
  nlohmann::ordered_json j;
  j["format"] = "oscint-series v1";
  j["h"] = s.h;
  j["n"] = s.step;
  j["t"] = s.t;
  j["H"] = s.energy;
  j["H_mod"] = s.modified;
  j["drift_H"] = s.drift_energy;
  j["drift_mod"] = s.drift_modified;
  j["norm_q"] = s.q_norm;
  j["norm_omega_q"] = s.omega_q_norm;
  j["norm_qdot"] = s.qdot_norm;
  // nlohmann prints doubles round-trip safe (shortest representation).
  os << j.dump(1) << '\n';
}

}  // namespace oscint
