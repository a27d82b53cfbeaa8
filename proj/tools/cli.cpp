#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscint/errors.hpp"
#include "oscint/filters.hpp"
#include "oscint/integrator.hpp"
#include "oscint/io.hpp"
#include "oscint/sampling.hpp"
#include "oscint/series.hpp"
#include "oscint/system.hpp"
#include "oscint/wave.hpp"

namespace oscint::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string filter = "deuflhard";
  std::vector<std::string> filters;
  double h = 0.1;
  std::vector<double> h_list;
  std::size_t steps = 1000;
  std::size_t stride = 0;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string formulation = "splitting";

  std::string system_path;
  std::size_t random_dim = 0;
  double random_a_norm = 1.0;
  double random_omega_max = 1e3;

  std::string problem_path;
  std::size_t K = 0;
  double rho = 1.0;
  double c2 = wave::kEmpiricalC2;
};

// Input errors map to exit code 1, contract failures to 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::uint64_t resolve_seed(const Options& o, std::ostream& err) {
  if (o.seed) return *o.seed;
  const std::uint64_t s = (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
  err << "seed: " << s << "\n";
  return s;
}

Formulation parse_formulation(const std::string& s) {
  if (s == "splitting") return Formulation::splitting;
  if (s == "direct") return Formulation::direct;
  throw InputError("unknown formulation '" + s + "' (expected splitting|direct)");
}

const FilterPair& filter_named(const std::string& name) {
  try {
    return find_filter(name);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

/// A linear problem ready to integrate, from an ode or wave source.
struct Problem {
  OscillatorSystem system;
  State initial;
  std::optional<wave::WaveProblem> wave;
};

wave::WaveProblem default_wave_problem(std::size_t K, double rho) {
  return wave::WaveProblem::from_functions(
      K, rho, wave::PotentialSpec::from_nonnegative({{1, Complex(0.25, 0.0)}}),
      [](double x) { return Complex(1.0 / (2.0 - std::cos(x))); }, [](double) { return Complex(); });
}

Problem load_wave(const Options& o) {
  try {
    wave::WaveProblem p;
    if (!o.problem_path.empty()) {
      p = io::problem_from_json(io::read_json_file(o.problem_path));
    } else {
      if (o.K == 0) throw InputError("wave source needs --problem FILE or --K N");
      if (!(o.rho >= 0.0)) throw InputError("--rho must be >= 0");
      p = default_wave_problem(o.K, o.rho);
    }
    auto built = wave::build_system(p);
    return {std::move(built.system), std::move(built.initial), std::move(p)};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

Problem load_ode(const Options& o, std::ostream& err) {
  try {
    if (!o.system_path.empty()) {
      const auto j = io::read_json_file(o.system_path);
      OscillatorSystem sys = io::system_from_json(j);
      auto s0 = io::state_from_json(j, sys.dim());
      if (!s0) {
        std::mt19937_64 rng(resolve_seed(o, err));
        s0 = random_state(rng, sys.dim());
      }
      return {std::move(sys), std::move(*s0), std::nullopt};
    }
    if (o.random_dim > 0) {
      std::mt19937_64 rng(resolve_seed(o, err));
      RandomSystemSpec spec;
      spec.dim = o.random_dim;
      spec.a_norm = o.random_a_norm;
      spec.omega_max = o.random_omega_max;
      // Draws whose modified energy is indefinite at the requested step sizes
      // grow exponentially; those are rejected.
      std::vector<const FilterPair*> pairs;
      for (const auto& name : (o.filters.empty() ? std::vector<std::string>{o.filter} : o.filters))
        pairs.push_back(&filter_named(name));
      const std::vector<double> hs = o.h_list.empty() ? std::vector<double>{o.h} : o.h_list;
      OscillatorSystem sys = random_bounded_system(rng, spec, pairs, hs);
      State s0 = random_state(rng, sys.dim());
      return {std::move(sys), std::move(s0), std::nullopt};
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  throw InputError("ode source needs --system FILE or --random D");
}

Problem load_any(const Options& o, std::ostream& err) {
  if (!o.problem_path.empty() || o.K > 0) return load_wave(o);
  return load_ode(o, err);
}

void write_series(const EnergySeries& s, const std::string& path, const std::string& format,
                  std::ostream& fallback) {
  auto emit = [&](std::ostream& os) {
    if (format == "json")
      write_json(os, s);
    else
      write_csv(os, s);
  };
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  emit(f);
}

std::string indexed_path(const std::string& base, const std::string& tag) {
  if (base.empty()) return base;
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return base + "_" + tag;
  return base.substr(0, dot) + "_" + tag + base.substr(dot);
}

struct RunSummary {
  std::string filter;
  double h = 0.0;
  std::size_t steps = 0;
  double max_drift_energy = 0.0;
  double max_drift_modified = 0.0;
  double scale = 0.0;
  bool blowup = false;
  std::size_t blowup_step = 0;
  bool contract_checked = false;
  bool contract_ok = true;
  bool advisory = false;
  std::string output;
};

RunSummary run_one(const Problem& p, const FilterPair& fp, double h, const Options& o,
                   const std::string& path, std::ostream& series_out) {
  RunSummary r;
  r.filter = fp.name;
  r.h = h;
  r.steps = o.steps;
  r.output = path;
  r.advisory = h > 1.0;
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("step size must be > 0");
  IntegratorConfig cfg{h, fp, parse_formulation(o.formulation)};
  IntegrateOptions opts;
  opts.stride = o.stride;
  const BoundConstants bc = bound_constants(p.system, fp);
  r.scale = drift_scale(p.system, bc, h, p.initial);
  try {
    const auto traj = integrate(p.system, linear_force(p.system), cfg, p.initial, o.steps, opts);
    r.max_drift_energy = traj.series.max_abs_drift_energy();
    r.max_drift_modified = traj.series.max_abs_drift_modified();
    write_series(traj.series, path, o.format, series_out);
  } catch (const NumericalBlowup& e) {
    r.blowup = true;
    r.blowup_step = e.step();
  }
  if (fp.hl_compliant) {
    r.contract_checked = true;
    r.contract_ok = !r.blowup && r.max_drift_modified <= 1e-8 * r.scale;
  }
  return r;
}

void print_summary(std::ostream& os, const RunSummary& r) {
  os << "filter=" << r.filter << " h=" << fmt(r.h) << " steps=" << r.steps;
  if (r.blowup) {
    os << " BLOWUP at step " << r.blowup_step << "\n";
    return;
  }
  os << " max|drift_H|=" << fmt(r.max_drift_energy) << " max|drift_mod|=" << fmt(r.max_drift_modified)
     << " scale=" << fmt(r.scale);
  if (r.contract_checked)
    os << " modified-energy-contract=" << (r.contract_ok ? "ok" : "FAILED");
  else
    os << " modified-energy-contract=n/a(non-compliant filter)";
  if (r.advisory) os << " (advisory: h > 1)";
  if (!r.output.empty()) os << " -> " << r.output;
  os << "\n";
}

bool hard_failure(const RunSummary& r) {
  return r.blowup || (r.contract_checked && !r.contract_ok && !r.advisory);
}

void print_certificate(std::ostream& os, const wave::RhoCertificate& c, double c2) {
  os << "certificate: ||A||=" << fmt(c.a_norm) << " ||V||_H1=" << fmt(c.potential_h1)
     << " omega_min=" << fmt(c.omega_min) << "\n";
  os << "certificate: rho-hypothesis (c2=" << fmt(c2) << ", threshold " << fmt(c.rho_threshold)
     << "): " << (c.hypothesis_with_c2 ? "holds" : "fails") << "\n";
  os << "certificate: direct condition sqrt(rho) >= 1/2 c0^2 ||A|| + 1 = " << fmt(c.omega_threshold)
     << ": " << (c.direct_condition ? "holds" : "fails") << "\n";
  os << "certificate: " << c.regime() << "\n";
}

// ---- subcommands ----------------------------------------------------------

int cmd_filters(std::ostream& out) {
  out << "name,phi,psi1,c0,c1,hl_compliant,c0_margin,c1_margin\n";
  for (const auto& fp : catalog()) {
    const auto cert = certify_filter_bounds(fp);
    out << fp.name << ',' << fp.phi.label << ',' << fp.psi1.label << ',' << fmt(fp.c0) << ','
        << fmt(fp.c1) << ',' << (fp.hl_compliant ? "true" : "false") << ',' << fmt(cert.c0_margin)
        << ',' << fmt(cert.c1_margin) << '\n';
  }
  return kExitOk;
}

int cmd_ode(const Options& o, std::ostream& out, std::ostream& err) {
  const Problem p = load_ode(o, err);
  const FilterPair& fp = filter_named(o.filter);
  std::ostream& summary = o.out.empty() ? err : out;
  const RunSummary r = run_one(p, fp, o.h, o, o.out, out);
  print_summary(summary, r);
  return hard_failure(r) ? kExitContractFailure : kExitOk;
}

int cmd_wave(const Options& o, std::ostream& out, std::ostream& err) {
  const Problem p = load_wave(o);
  const FilterPair& fp = filter_named(o.filter);
  std::ostream& summary = o.out.empty() ? err : out;
  const auto cert = wave::rho_certificate(*p.wave, fp, o.c2);
  print_certificate(summary, cert, o.c2);

  const std::vector<double> hs = o.h_list.empty() ? std::vector<double>{o.h} : o.h_list;
  bool failed = false;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string path = hs.size() > 1 ? indexed_path(o.out, "h" + std::to_string(i)) : o.out;
    const RunSummary r = run_one(p, fp, hs[i], o, path, out);
    print_summary(summary, r);
    failed = failed || hard_failure(r);
  }
  return failed ? kExitContractFailure : kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Problem p = load_any(o, err);
  std::vector<const FilterPair*> fps;
  for (const auto& name : (o.filters.empty() ? std::vector<std::string>{o.filter} : o.filters))
    fps.push_back(&filter_named(name));
  const std::vector<double> hs = o.h_list.empty() ? std::vector<double>{o.h} : o.h_list;
  for (double h : hs)
    if (!(h > 0.0)) throw InputError("step sizes must be > 0");

  struct Job {
    const FilterPair* fp;
    double h;
    std::string path;
  };
  std::vector<Job> jobs;
  for (const auto* fp : fps)
    for (std::size_t i = 0; i < hs.size(); ++i)
      jobs.push_back({fp, hs[i], indexed_path(o.out, fp->name + "_h" + std::to_string(i))});

  std::vector<RunSummary> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      std::ostringstream discard;
      try {
        results[k] = run_one(p, *jobs[k].fp, jobs[k].h, o, jobs[k].path, discard);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(o.jobs, 1, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& e : errors)
    if (!e.empty()) throw InputError(e);
  bool failed = false;
  for (const auto& r : results) {
    print_summary(out, r);
    failed = failed || hard_failure(r);
  }
  return failed ? kExitContractFailure : kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out, std::ostream& err) {
  const Problem p = load_any(o, err);
  const FilterPair& fp = filter_named(o.filter);
  const double h = o.h;
  if (!(h > 0.0)) throw InputError("--h must be > 0");
  const bool advisory = h > 1.0;
  const auto& sys = p.system;
  const BoundConstants bc = bound_constants(sys, fp);
  const Nonlinearity g = linear_force(sys);
  const double scale = drift_scale(sys, bc, h, p.initial);

  ordered_json report;
  report["filter"] = fp.name;
  report["hl_compliant"] = fp.hl_compliant;
  report["h"] = h;
  report["steps"] = o.steps;
  report["advisory"] = advisory;
  report["constants"] = {{"a_norm", bc.a_norm},
                         {"c_breve", bc.c_breve},
                         {"c_hat", bc.c_hat},
                         {"c_tilde", bc.c_tilde},
                         {"omega_min_nonzero", std::isinf(bc.omega_min_nonzero) ? ordered_json(nullptr)
                                                                                : ordered_json(bc.omega_min_nonzero)}};
  bool hard_fail = false;

  double worst_quadratic = std::numeric_limits<double>::infinity();
  double worst_energy = std::numeric_limits<double>::infinity();
  bool closeness_ok = true;
  double worst_exchange = 0.0;
  std::optional<State> previous;
  IntegratorConfig cfg{h, fp, parse_formulation(o.formulation)};
  IntegrateOptions opts;
  opts.stride = 1;
  opts.observer = [&](std::size_t, const State& s) {
    const auto c = closeness_check(sys, fp, bc, h, s);
    worst_quadratic = std::min(worst_quadratic, c.slack_quadratic / c.scale);
    worst_energy = std::min(worst_energy, c.slack_energy / c.scale);
    closeness_ok = closeness_ok && c.ok();
    if (previous) {
      const auto x = exchange_defect(sys, g, fp, h, *previous, s);
      if (x.scale > 0.0) worst_exchange = std::max(worst_exchange, x.defect / x.scale);
    }
    previous = s;
  };

  std::optional<Trajectory> traj;
  try {
    traj = integrate(sys, g, cfg, p.initial, o.steps, opts);
  } catch (const NumericalBlowup& e) {
    report["blowup_step"] = e.step();
    hard_fail = true;
  }

  if (traj) {
    const auto& series = traj->series;
    report["observed"] = {{"max_abs_drift_H", series.max_abs_drift_energy()},
                          {"max_abs_drift_mod", series.max_abs_drift_modified()},
                          {"scale", scale}};
    report["closeness"] = {{"worst_relative_slack_quadratic", o.steps ? worst_quadratic : 0.0},
                           {"worst_relative_slack_energy", o.steps ? worst_energy : 0.0},
                           {"ok", closeness_ok}};
    if (!closeness_ok && !advisory) hard_fail = true;

    if (fp.hl_compliant) {
      const bool mod_ok = series.max_abs_drift_modified() <= 1e-8 * scale;
      const bool exch_ok = worst_exchange <= 1e-12;
      report["modified_energy"] = {{"relative_drift", series.max_abs_drift_modified() / scale},
                                   {"ok", mod_ok}};
      report["exchange_defect"] = {{"worst_relative", worst_exchange}, {"ok", exch_ok}};
      hard_fail = hard_fail || (!advisory && (!mod_ok || !exch_ok));
      if (series.empty()) {
        report["drift_bound"] = {{"status", "no steps"}};
      } else {
        const auto d = drift_bound_check(fp, bc, h, series);
        report["drift_bound"] = {{"status", "checked"},
                                 {"worst_slack", d.worst_slack},
                                 {"worst_step", d.worst_step},
                                 {"max_drift", d.max_drift},
                                 {"ok", d.ok}};
        if (!d.ok && !advisory) hard_fail = true;
      }
    } else {
      report["modified_energy"] = {{"status", "not applicable (hypothesis unmet)"}};
      report["exchange_defect"] = {{"status", "not applicable (hypothesis unmet)"}};
      report["drift_bound"] = {{"status", "not applicable (hypothesis unmet)"},
                               {"observed_max_drift_H", series.max_abs_drift_energy()}};
    }

    const auto cert = unconditional_bound_check(sys, fp, h, p.initial);
    if (cert.issued) {
      ordered_json u = {{"status", "certified"},
                        {"omega_threshold", cert.omega_threshold},
                        {"drift_ceiling", cert.drift_ceiling}};
      if (!series.empty()) {
        const auto a = audit_unconditional(cert, series);
        u["worst_energy_slack"] = a.worst_energy_slack;
        u["worst_drift_slack"] = a.worst_drift_slack;
        u["ok"] = a.ok;
        if (!a.ok && !advisory) hard_fail = true;
      }
      report["unconditional"] = u;
    } else {
      report["unconditional"] = {{"status", "refused"}, {"diagnostic", cert.diagnostic}};
    }
  }

  if (p.wave) {
    const auto c = wave::rho_certificate(*p.wave, fp, o.c2);
    report["wave_certificate"] = {{"a_norm", c.a_norm},
                                  {"potential_h1", c.potential_h1},
                                  {"c2_estimate", o.c2},
                                  {"rho_hypothesis", c.hypothesis_with_c2},
                                  {"direct_condition", c.direct_condition},
                                  {"regime", c.regime()}};
  }
  report["ok"] = !hard_fail;

  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + o.out + "'");
    f << text;
  }
  return hard_fail ? kExitContractFailure : kExitOk;
}

void add_source_options(CLI::App* cmd, Options& o, bool ode, bool wave) {
  if (ode) {
    cmd->add_option("--system", o.system_path, "System JSON {omegas, coupling_re, coupling_im}");
    cmd->add_option("--random", o.random_dim, "Draw a random system of this dimension");
    cmd->add_option("--random-a-norm", o.random_a_norm, "||A|| of the random coupling");
    cmd->add_option("--random-omega-max", o.random_omega_max, "Upper end of random frequencies");
  }
  if (wave) {
    cmd->add_option("--problem", o.problem_path, "Klein-Gordon problem JSON");
    cmd->add_option("--K", o.K, "Spectral degree (modes -K..K-1)");
    cmd->add_option("--rho", o.rho, "Mass parameter rho >= 0");
    cmd->add_option("--c2", o.c2, "Estimate of the potential-norm constant c2");
  }
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--filter", o.filter, "deuflhard|hairer-lubich|gautschi|unfiltered");
  cmd->add_option("--h", o.h, "Step size");
  cmd->add_option("--steps", o.steps, "Number of steps");
  cmd->add_option("--stride", o.stride, "Record every N steps (0: automatic)");
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--formulation", o.formulation, "splitting|direct");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Trigonometric integrators: long-time energy experiments and audits", "oscint"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  auto* filters = app.add_subcommand("filters", "List the filter catalog with its constants");
  auto* ode = app.add_subcommand("ode", "Integrate a linear oscillatory system");
  add_source_options(ode, o, true, false);
  add_run_options(ode, o);

  auto* wav = app.add_subcommand("wave", "Integrate the Klein-Gordon collocation system");
  add_source_options(wav, o, false, true);
  add_run_options(wav, o);
  wav->add_option("--h-list", o.h_list, "Comma separated step sizes")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "Run filters x step sizes concurrently");
  add_source_options(sweep, o, true, true);
  add_run_options(sweep, o);
  sweep->add_option("--h-list", o.h_list, "Comma separated step sizes")->delimiter(',');
  sweep->add_option("--filters", o.filters, "Comma separated filter names")->delimiter(',');
  sweep->add_option("--jobs", o.jobs, "Concurrent runs");

  auto* audit = app.add_subcommand("audit", "Check every bound along a run; JSON report");
  add_source_options(audit, o, true, true);
  add_run_options(audit, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (o.steps > 0 && o.h_list.empty() && !(o.h > 0.0)) throw InputError("--h must be > 0");
    if (filters->parsed()) return cmd_filters(out);
    if (ode->parsed()) return cmd_ode(o, out, err);
    if (wav->parsed()) return cmd_wave(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (audit->parsed()) return cmd_audit(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericalBlowup& e) {
    err << "error: " << e.what() << "\n";
    return kExitContractFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace oscint::cli
