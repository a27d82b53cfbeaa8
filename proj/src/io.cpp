#include "oscint/io.hpp"

#include <fstream>
#include <stdexcept>

namespace oscint::io {

namespace {

std::vector<std::vector<double>> matrix_part(const CMatrix& m, bool imag) {
  std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < m.size(); ++k) rows[i][k] = imag ? m(i, k).imag() : m(i, k).real();
  return rows;
}

void read_matrix_part(const json& rows, CMatrix& m, bool imag, const char* name) {
  if (!rows.is_array() || rows.size() != m.size())
    throw std::invalid_argument(std::string(name) + " must be a " + std::to_string(m.size()) + "x" +
                                std::to_string(m.size()) + " array");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != m.size())
      throw std::invalid_argument(std::string(name) + ": row " + std::to_string(i) + " has wrong length");
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double v = rows[i][k].get<double>();
      if (imag)
        m(i, k).imag(v);
      else
        m(i, k).real(v);
    }
  }
}

CVector complex_vector(const json& j, const char* re_key, const char* im_key, std::size_t dim) {
  CVector v(dim);
  if (j.contains(re_key)) {
    const auto re = j.at(re_key).get<std::vector<double>>();
    if (re.size() != dim) throw std::invalid_argument(std::string(re_key) + ": wrong length");
    for (std::size_t i = 0; i < dim; ++i) v[i].real(re[i]);
  }
  if (j.contains(im_key)) {
    const auto im = j.at(im_key).get<std::vector<double>>();
    if (im.size() != dim) throw std::invalid_argument(std::string(im_key) + ": wrong length");
    for (std::size_t i = 0; i < dim; ++i) v[i].imag(im[i]);
  }
  return v;
}

json mode_list(const CVector& coeffs, std::size_t K) {
  json arr = json::array();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0)
      arr.push_back({{"j", wave::mode_of_index(i, K)}, {"re", coeffs[i].real()}, {"im", coeffs[i].imag()}});
  return arr;
}

CVector coefficients_from(const json& j, const char* key, std::size_t K) {
  CVector v(2 * K);
  if (!j.contains(key)) return v;
  for (const auto& e : j.at(key)) {
    const int mode = e.at("j").get<int>();
    const auto idx = wave::index_of_mode(mode, K);
    v[idx] = Complex(e.value("re", 0.0), e.value("im", 0.0));
  }
  return v;
}

}  // namespace

json system_to_json(const OscillatorSystem& sys) {
  return {{"omegas", sys.omegas()},
          {"coupling_re", matrix_part(sys.coupling(), false)},
          {"coupling_im", matrix_part(sys.coupling(), true)}};
}

OscillatorSystem system_from_json(const json& j) {
  try {
    const auto omegas = j.at("omegas").get<RVector>();
    CMatrix a(omegas.size());
    if (j.contains("coupling_re")) read_matrix_part(j.at("coupling_re"), a, false, "coupling_re");
    if (j.contains("coupling_im")) read_matrix_part(j.at("coupling_im"), a, true, "coupling_im");
    return OscillatorSystem(omegas, std::move(a));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("system JSON: ") + e.what());
  }
}

json state_to_json(const State& s) {
  RVector qr, qi, vr, vi;
  for (const auto& z : s.q) {
    qr.push_back(z.real());
    qi.push_back(z.imag());
  }
  for (const auto& z : s.qdot) {
    vr.push_back(z.real());
    vi.push_back(z.imag());
  }
  return {{"q0_re", qr}, {"q0_im", qi}, {"v0_re", vr}, {"v0_im", vi}};
}

std::optional<State> state_from_json(const json& j, std::size_t dim) {
  if (!j.contains("q0_re") && !j.contains("q0_im") && !j.contains("v0_re") && !j.contains("v0_im"))
    return std::nullopt;
  try {
    return State{complex_vector(j, "q0_re", "q0_im", dim), complex_vector(j, "v0_re", "v0_im", dim), 0.0};
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state JSON: ") + e.what());
  }
}

wave::WaveProblem problem_from_json(const json& j) {
  try {
    wave::WaveProblem p;
    p.K = j.at("K").get<std::size_t>();
    p.rho = j.at("rho").get<double>();
    if (p.K == 0) throw std::invalid_argument("problem JSON: K must be >= 1");
    std::map<int, Complex> v;
    if (j.contains("potential"))
      for (const auto& e : j.at("potential"))
        v[e.at("j").get<int>()] = Complex(e.value("re", 0.0), e.value("im", 0.0));
    p.potential = wave::PotentialSpec(std::move(v));
    p.u0 = coefficients_from(j, "u0", p.K);
    p.v0 = coefficients_from(j, "v0", p.K);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("problem JSON: ") + e.what());
  } catch (const std::out_of_range&) {
    throw std::invalid_argument(std::string("problem JSON: initial data mode outside -K..K-1"));
  }
}

json problem_to_json(const wave::WaveProblem& p) {
  json pot = json::array();
  for (const auto& [j, v] : p.potential.coefficients())
    if (v != 0.0) pot.push_back({{"j", j}, {"re", v.real()}, {"im", v.imag()}});
  return {{"K", p.K}, {"rho", p.rho}, {"potential", pot}, {"u0", mode_list(p.u0, p.K)},
          {"v0", mode_list(p.v0, p.K)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "': " + e.what());
  }
}

}  // namespace oscint::io
