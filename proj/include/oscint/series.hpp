#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace oscint {

/// Per-step record of H, the modified energy, their drifts and the norms
/// ||q||, ||Ωq||, ||q̇||. Stored column-wise; drifts are relative to row 0.
struct EnergySeries {
  double h = 0.0;
  std::vector<std::size_t> step;
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> modified;
  std::vector<double> drift_energy;
  std::vector<double> drift_modified;
  std::vector<double> q_norm;
  std::vector<double> omega_q_norm;
  std::vector<double> qdot_norm;

  std::size_t size() const { return step.size(); }
  bool empty() const { return step.empty(); }

  void append(std::size_t n, double energy_value, double modified_value, double qn, double omega_qn,
              double qdotn);

  double max_abs_drift_energy() const;
  double max_abs_drift_modified() const;

  /// Throws std::logic_error unless steps strictly increase and t = n·h
  /// within 1e-12 relative.
  void validate() const;
};

inline constexpr const char* kSeriesHeader = "# oscint-series v1";

/// CSV with a version comment line and 17 significant digits.
void write_csv(std::ostream& os, const EnergySeries& series);
/// JSON object with the same columns as named arrays.
void write_json(std::ostream& os, const EnergySeries& series);
std::string to_csv(const EnergySeries& series);

}  // namespace oscint
