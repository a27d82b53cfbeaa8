#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "oscint/system.hpp"
#include "oscint/wave.hpp"

namespace oscint::io {

using nlohmann::json;

/// {omegas: [..], coupling_re: [[..]], coupling_im: [[..]]}
json system_to_json(const OscillatorSystem& sys);
/// coupling_im may be omitted (real coupling). Throws std::invalid_argument.
OscillatorSystem system_from_json(const json& j);

/// Optional initial state stored next to a system: q0_re, q0_im, v0_re, v0_im.
json state_to_json(const State& s);
std::optional<State> state_from_json(const json& j, std::size_t dim);

/// {K, rho, potential: [{j, re, im}], u0: [...], v0: [...]}; omitted entries are zero.
wave::WaveProblem problem_from_json(const json& j);
json problem_to_json(const wave::WaveProblem& p);

json read_json_file(const std::string& path);

}  // namespace oscint::io
