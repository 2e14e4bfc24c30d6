#pragma once

// Command-line front end: subcommand dispatch, output tables, manifests and
// the error-to-exit-code mapping. Exit codes are listed in README.md.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdem/bogoliubov.hpp"
#include "tdem/cavity.hpp"
#include "tdem/classical.hpp"
#include "tdem/config.hpp"
#include "tdem/error.hpp"
#include "tdem/fock_oracle.hpp"
#include "tdem/gupta_bleuler.hpp"
#include "tdem/io.hpp"
#include "tdem/rwa.hpp"
#include "tdem/simulation.hpp"
#include "tdem/validate.hpp"

#ifndef TDEM_VERSION
#define TDEM_VERSION "0.0.0"
#endif

namespace tdem::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kConfig = 3, kRuntime = 4, kValidation = 5, kIo = 6 };

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Raised after the report is written when any invariant check failed.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<std::string> failed)
      : Error(std::to_string(failed.size()) + " invariant check(s) failed"), failed_(std::move(failed)) {}
  const std::vector<std::string>& failed() const noexcept { return failed_; }

 private:
  std::vector<std::string> failed_;
};

struct GlobalOptions {
  std::string config_path;
  std::string output;
  std::string format;
  unsigned jobs = 1;
  long long seed = 0;
  bool quiet = false;
};

struct Context {
  SimulationConfig config;
  std::filesystem::path out;
  std::string format;
  unsigned jobs = 1;
  long long seed = 0;
  bool quiet = false;
  std::ostream* log = &std::cout;

  void say(const std::string& line) const {
    if (!quiet) *log << line << "\n";
  }
};

/// --config wins over TDEM_CONFIG; with neither, the built-in defaults apply.
inline SimulationConfig resolve_config(const GlobalOptions& g) {
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("TDEM_CONFIG"); env && *env) path = env;
  }
  SimulationConfig c = path.empty() ? default_config() : load_config_file(path);
  if (!g.output.empty()) c.output_path = g.output;
  if (!g.format.empty()) c.output_format = g.format;
  validate(c);
  return c;
}

inline Context make_context(const GlobalOptions& g) {
  if (g.jobs == 0) throw UsageError("--jobs must be >= 1");
  Context ctx;
  ctx.config = resolve_config(g);
  ctx.out = ctx.config.output_path;
  ctx.format = ctx.config.output_format;
  ctx.jobs = g.jobs;
  ctx.seed = g.seed;
  ctx.quiet = g.quiet;
  return ctx;
}

inline io::RunManifest start_manifest(const Context& ctx, const std::string& subcommand, const std::filesystem::path& dir) {
  io::RunManifest m;
  m.config = to_json(ctx.config);
  m.tool_version = TDEM_VERSION;
  m.subcommand = subcommand;
  m.directory = dir;
  m.options = {{"format", ctx.format}, {"jobs", ctx.jobs}, {"seed", ctx.seed}};
  return m;
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::filesystem::path emit(io::RunManifest& m, const std::string& stem, const io::Table& t, const std::string& format) {
  const auto p = io::write_table(m.directory, stem, t, format);
  m.add_output(p);
  return p;
}

inline std::filesystem::path emit_json(io::RunManifest& m, const std::string& name, const nlohmann::json& j) {
  const auto p = m.directory / name;
  io::write_text(p, j.dump(2) + "\n");
  m.add_output(p);
  return p;
}

// ---------------------------------------------------------------- simulate

inline io::Table timeseries_table(const SimulationConfig& c, const EvolutionResult& res) {
  io::Table t;
  t.columns = {"t", "mode_index", "lambda", "re_u", "im_u", "re_v", "im_v", "n_photons", "symplectic_residual"};
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    for (const auto& e : res.entries) {
      const Coefficients co{e.u[i], e.v[i]};
      t.add({res.t[i], to_string(e.mode.n), static_cast<long long>(e.lambda), co.u.real(), co.u.imag(), co.v.real(),
             co.v.imag(), reported_number(e.lambda, co, c.initial_occupations[e.lambda]), symplectic_residual(co)});
    }
  }
  return t;
}

struct SimulationSummary {
  double total_n = 0.0;
  double sigma = 0.0;
  double max_drift = 0.0;
};

/// Totals at the final sample. Sigma uses the pair amplitude of the lowest mode.
inline SimulationSummary summarize(const SimulationConfig& c, const EvolutionResult& res) {
  SimulationSummary s;
  s.max_drift = res.max_drift;
  const std::size_t last = res.t.size() - 1;
  const Trajectory* lowest = nullptr;
  for (const auto& e : res.entries) {
    s.total_n += reported_number(e.lambda, {e.u[last], e.v[last]}, c.initial_occupations[e.lambda]);
    if (!lowest || e.mode.k_norm < lowest->mode.k_norm) lowest = &e;
  }
  if (lowest) s.sigma = sigma_from_pair_amplitude(std::abs(lowest->v[last]), c.epsilon_static, c.cavity_side_L);
  return s;
}

inline nlohmann::json summary_json(const SimulationSummary& s, const EvolutionResult& res) {
  return {{"t_final", res.t.back()}, {"total_n", s.total_n}, {"sigma_natural", s.sigma},
          {"max_symplectic_drift", s.max_drift}, {"steps", res.steps}};
}

inline io::RunManifest run_simulate(const Context& ctx, const std::filesystem::path& dir, unsigned jobs,
                                    SimulationSummary* summary_out = nullptr) {
  const auto t0 = Clock::now();
  auto m = start_manifest(ctx, "simulate", dir);
  const auto res = evolve(ctx.config, jobs);
  emit(m, "timeseries", timeseries_table(ctx.config, res), ctx.format);
  const auto s = summarize(ctx.config, res);
  emit_json(m, "summary.json", summary_json(s, res));
  if (summary_out) *summary_out = s;
  m.wall_time_s = seconds_since(t0);
  m.write();
  return m;
}

// ---------------------------------------------------------------- rwa, sigma

inline io::Table rwa_table(const SimulationConfig& c) {
  const auto d = drive_params(c);
  const auto times = output_times(make_evolve_options(c));
  io::Table t;
  t.columns = {"t", "r", "n_lambda0", "n_lambda1", "n_lambda2", "n_lambda3", "n_total"};
  const auto& nb = c.initial_occupations;
  const bool thermal = nb[1] != 0.0 || nb[2] != 0.0;
  for (double time : times) {
    RwaNumbers n = thermal ? thermal_number_rwa(d, time, {nb[1], nb[2]}) : vacuum_number_rwa(d, time, c.polarizations);
    if (thermal) {
      std::array<double, 4> kept{};
      n.total = 0.0;
      for (int l : c.polarizations) {
        kept[l] = n.per_lambda[l];
        n.total += kept[l];
      }
      n.per_lambda = kept;
    }
    t.add({time, n.r, n.per_lambda[0], n.per_lambda[1], n.per_lambda[2], n.per_lambda[3], n.total});
  }
  return t;
}

inline io::Table sigma_table(const SimulationConfig& c) {
  const auto d = drive_params(c);
  const auto times = output_times(make_evolve_options(c));
  io::Table t;
  t.columns = {"t", "r", "unphysical_energy", "sigma_natural", "sigma_si", "sigma_alt_prefactor"};
  for (double time : times) {
    const auto rep = surface_charge(d, time, c.cavity_side_L, c.si_scale);
    io::Cell si;
    if (rep.sigma_si) si = *rep.sigma_si;
    t.add({time, rep.r, rep.unphysical_energy, rep.sigma_natural, si, rep.sigma_alt_prefactor});
  }
  return t;
}

template <class TableFn>
inline io::RunManifest run_table_command(const Context& ctx, const std::string& name, const std::string& stem,
                                         TableFn make_table) {
  const auto t0 = Clock::now();
  auto m = start_manifest(ctx, name, ctx.out);
  const auto p = emit(m, stem, make_table(ctx.config), ctx.format);
  m.wall_time_s = seconds_since(t0);
  m.write();
  ctx.say("wrote " + p.string());
  return m;
}

// ---------------------------------------------------------------- oracle

struct OracleFlags {
  std::optional<int> cutoff;
  std::optional<double> r;
  std::optional<double> nbar;
  std::string mode = "rwa";
  std::size_t samples = 101;
};

inline io::RunManifest run_oracle(const Context& ctx, const OracleFlags& f) {
  const auto t0 = Clock::now();
  const auto& c = ctx.config;
  const auto d = drive_params(c);
  OracleOptions o;
  o.cutoff = f.cutoff.value_or(c.fock_cutoff);
  if (o.cutoff < 2) throw ConfigError("--cutoff", "Fock cutoff must be >= 2");
  o.samples = f.samples;
  o.leakage_threshold = c.tolerance("leakage");
  o.t_max = c.t_max;
  if (f.r) {
    const double g = squeeze_rate(d);
    if (!(g > 0.0)) throw ConfigError("--r", "a target r needs a non-zero drive");
    if (!(*f.r >= 0.0)) throw ConfigError("--r", "must be non-negative");
    o.t_max = *f.r / g;
  }
  HamiltonianSpec spec;
  if (f.mode == "rwa") {
    spec = RwaDrive{rwa_coefficient(d.epsilon, d.delta, d.omega)};
  } else if (f.mode == "full") {
    spec = FullDrive{make_profile(c), build_mode(c.mode_list.front(), c.cavity_side_L).k_norm};
  } else {
    throw UsageError("--mode must be rwa or full");
  }
  const double nbar = f.nbar.value_or(c.initial_occupations[1]);
  if (!(nbar >= 0.0)) throw ConfigError("--nbar", "mean occupation must be non-negative");
  const OracleInitial init = nbar > 0.0 ? OracleInitial{ThermalState{nbar}} : OracleInitial{VacuumState{}};
  const auto run = evolve_oracle(spec, init, o);

  io::Table t;
  t.columns = {"t", "N", "leakage", "norm"};
  for (std::size_t i = 0; i < run.t.size(); ++i) t.add({run.t[i], run.n[i], run.leakage[i], run.norm[i]});
  auto m = start_manifest(ctx, "oracle", ctx.out);
  m.options["cutoff"] = o.cutoff;
  m.options["mode"] = f.mode;
  m.options["nbar"] = nbar;
  m.options["samples"] = f.samples;
  if (f.r) m.options["r"] = *f.r;
  const auto p = emit(m, "oracle", t, ctx.format);
  m.wall_time_s = seconds_since(t0);
  m.write();
  ctx.say("wrote " + p.string());
  return m;
}

// ---------------------------------------------------------------- classical

inline io::RunManifest run_classical(const Context& ctx, const std::string& branch_name) {
  const auto t0 = Clock::now();
  const auto& c = ctx.config;
  Branch branch;
  if (branch_name == "spatial") branch = Branch::Spatial;
  else if (branch_name == "temporal") branch = Branch::Temporal;
  else throw UsageError("--branch must be spatial or temporal");

  const auto profile = make_profile(c);
  const double k = build_mode(c.mode_list.front(), c.cavity_side_L).k_norm;
  const double omega0 = k / std::sqrt(profile.eval(0.0));
  const auto tr = integrate_classical(profile, branch, k, {1.0, omega0}, c.t_max, c.dt, c.output_stride);

  io::Table t;
  t.columns = {"t", "re_q", "im_q", "envelope", "branch"};
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const auto& s = tr.states[i];
    const double w = k / std::sqrt(profile.eval(tr.t[i]));
    const double env = std::sqrt(std::norm(s.q) + std::norm(s.q_dot) / (w * w));
    t.add({tr.t[i], s.q.real(), s.q.imag(), env, std::string(to_string(branch))});
  }

  nlohmann::json summary = {{"branch", to_string(branch)}, {"p", nullptr}, {"mu", nullptr}, {"r2", nullptr}};
  if (profile.kind() == PermittivityProfile::Kind::Tabulated) {
    const auto& knots = profile.table()->knots();
    const double span = knots.back() - knots.front();
    const auto a = adiabatic_amplitude_check(profile, k, std::min(c.t_max, span), span, c.dt);
    summary["p"] = a.exponent;
    summary["r2"] = a.r2;
    summary["inconclusive"] = a.inconclusive;
  } else if (profile.delta() / profile.epsilon_static() <= 1e-2) {
    const auto g = parametric_growth_rate(profile, k, c.t_max, branch, c.dt);
    summary["mu"] = g.mu;
    summary["mu_expected"] = g.expected;
    summary["r2"] = g.r2;
    summary["inconclusive"] = g.inconclusive;
  }

  auto m = start_manifest(ctx, "classical", ctx.out);
  m.options["branch"] = to_string(branch);
  const auto p = emit(m, "classical", t, ctx.format);
  emit_json(m, "classical_summary.json", summary);
  m.wall_time_s = seconds_since(t0);
  m.write();
  ctx.say("wrote " + p.string());
  return m;
}

// ---------------------------------------------------------------- modes

inline io::Table modes_table(const SimulationConfig& c, int nmax) {
  if (nmax < 1) throw ConfigError("--nmax", "must be >= 1");
  io::Table t;
  t.columns = {"mode_index", "nx", "ny", "nz", "kx", "ky", "kz", "k_norm", "omega0", "axis_degenerate"};
  const double eps0 = make_profile(c).eval(0.0);
  for (const auto& n : mode_lattice(nmax)) {
    const auto m = build_mode(n, c.cavity_side_L);
    t.add({to_string(n), static_cast<long long>(n[0]), static_cast<long long>(n[1]), static_cast<long long>(n[2]),
           m.k[0], m.k[1], m.k[2], m.k_norm, eigenfrequency(m, eps0), static_cast<long long>(m.is_axis_degenerate)});
  }
  return t;
}

// ---------------------------------------------------------------- sweep

/// Resolves "delta" style shorthands to a dotted path in the config document.
inline std::string resolve_param_path(const nlohmann::json& doc, const std::string& param) {
  if (param.find('.') != std::string::npos) return param;
  std::string hit;
  for (const auto& [section, body] : doc.items()) {
    if (body.is_object() && body.contains(param)) {
      if (!hit.empty()) throw ConfigError(param, "ambiguous parameter; use section.key");
      hit = section + "." + param;
    }
  }
  if (hit.empty()) throw ConfigError(param, "no such configuration field");
  return hit;
}

inline SimulationConfig with_param(const SimulationConfig& base, const std::string& path, double value) {
  auto doc = to_json(base);
  const auto dot = path.find('.');
  const std::string section = path.substr(0, dot);
  const std::string key = dot == std::string::npos ? std::string() : path.substr(dot + 1);
  if (key.empty() || !doc.contains(section) || !doc[section].is_object() || !doc[section].contains(key)) {
    throw ConfigError(path, "no such configuration field");
  }
  if (!doc[section][key].is_number()) throw ConfigError(path, "sweep target is not a scalar numeric field");
  if (doc[section][key].is_number_integer()) {
    if (value != std::floor(value)) throw ConfigError(path, "sweep values for an integer field must be integral");
    doc[section][key] = static_cast<long long>(value);
  } else {
    doc[section][key] = value;
  }
  return load_config(doc);
}

struct SweepFlags {
  std::string param;
  std::vector<double> values;
  std::optional<double> fix_r;
};

inline std::string sweep_dir_name(std::size_t index, const std::string& path, double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%03zu_%s=%.9g", index, path.c_str(), value);
  return buf;
}

inline io::RunManifest run_sweep(const Context& ctx, const SweepFlags& f) {
  const auto t0 = Clock::now();
  if (f.values.empty()) throw UsageError("sweep needs at least one value");
  const std::string path = resolve_param_path(to_json(ctx.config), f.param);

  std::vector<Context> runs;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    Context run = ctx;
    run.config = with_param(ctx.config, path, f.values[i]);
    if (f.fix_r) {
      const double g = squeeze_rate(drive_params(run.config));
      if (!(g > 0.0)) throw ConfigError("--fix-r", "a target r needs a non-zero drive");
      run.config.t_max = *f.fix_r / g;
    }
    run.out = ctx.out / sweep_dir_name(i, path, f.values[i]);
    run.config.output_path = run.out.string();
    runs.push_back(std::move(run));
  }

  // Batches of --jobs independent runs; results are gathered in input order.
  std::vector<SimulationSummary> summaries(runs.size());
  std::vector<io::RunManifest> manifests(runs.size());
  const std::size_t jobs = std::max<unsigned>(1, ctx.jobs);
  for (std::size_t start = 0; start < runs.size(); start += jobs) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(runs.size(), start + jobs); ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        manifests[i] = run_simulate(runs[i], runs[i].out, 1, &summaries[i]);
      }));
    }
    for (auto& fut : batch) fut.get();
  }

  io::Table t;
  t.columns = {"value", "total_N", "sigma"};
  for (std::size_t i = 0; i < runs.size(); ++i) t.add({f.values[i], summaries[i].total_n, summaries[i].sigma});
  auto m = start_manifest(ctx, "sweep", ctx.out);
  m.options["param"] = path;
  m.options["values"] = f.values;
  if (f.fix_r) m.options["fix_r"] = *f.fix_r;
  const auto p = emit(m, "summary", t, "csv");
  for (const auto& r : manifests) m.add_output(r.directory / "manifest.json");
  m.wall_time_s = seconds_since(t0);
  m.write();
  ctx.say("wrote " + p.string() + " and " + std::to_string(runs.size()) + " run directories");
  return m;
}

// ---------------------------------------------------------------- validate

inline io::Table validation_table(const std::vector<CheckResult>& checks) {
  io::Table t;
  t.columns = {"check", "value", "threshold", "pass"};
  for (const auto& c : checks) t.add({c.module + "." + c.name, c.value, c.threshold, std::string(c.pass ? "true" : "false")});
  return t;
}

inline io::RunManifest run_validate(const Context& ctx) {
  const auto t0 = Clock::now();
  const auto checks = run_validation_suite();
  auto m = start_manifest(ctx, "validate", ctx.out);
  const auto p = emit(m, "validate_report", validation_table(checks), ctx.format);
  m.wall_time_s = seconds_since(t0);
  m.write();
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    if (!c.pass) failed.push_back(c.module + "." + c.name);
    char line[256];
    std::snprintf(line, sizeof line, "%s %s.%s value=%.6g threshold=%.6g", c.pass ? "PASS" : "FAIL", c.module.c_str(),
                  c.name.c_str(), c.value, c.threshold);
    ctx.say(line);
  }
  ctx.say("wrote " + p.string());
  if (!failed.empty()) throw ValidationFailed(failed);
  return m;
}

// ---------------------------------------------------------------- dispatch

/// Parses "1e-4,1e-3"; every entry must be a complete number.
inline std::vector<double> parse_value_list(const std::string& text) {
  if (text.empty()) throw UsageError("--values: empty value list");
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw UsageError("--values: '" + item + "' is not a number");
    }
    values.push_back(v);
    start = comma + 1;
  }
  return values;
}

/// First bare word that is neither a subcommand nor the value of a global option.
inline std::optional<std::string> unknown_subcommand(const CLI::App& app, int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("-", 0) == 0) {
      if (a.find('=') == std::string::npos && a != "--quiet" && a != "--help" && a != "-h" && a != "--version") ++i;
      continue;
    }
    try {
      app.get_subcommand(a);
      return std::nullopt;
    } catch (const CLI::OptionNotFound&) {
      return a;
    }
  }
  return std::nullopt;
}

inline int report_error(std::ostream& err, int code, const std::string& kind, const std::string& message,
                        nlohmann::json context = nlohmann::json::object()) {
  err << io::error_json(kind, message, std::move(context)).dump() << "\n";
  return code;
}

/// Parses argv, runs the subcommand and maps failures to exit codes. Errors
/// are written to `err` as one JSON object per line.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Photon creation in a cavity with time-dependent permittivity", "tdem"};
  app.set_version_flag("--version", TDEM_VERSION);
  app.require_subcommand(1, 1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON configuration file (overrides TDEM_CONFIG)");
  app.add_option("--output", g.output, "output directory (overrides output.path)");
  app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", g.jobs, "worker threads");
  app.add_option("--seed", g.seed, "reserved; every algorithm is deterministic");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  auto* simulate = app.add_subcommand("simulate", "integrate the mode amplitudes");
  auto* rwa = app.add_subcommand("rwa", "closed-form rotating-wave photon numbers");
  auto* oracle = app.add_subcommand("oracle", "truncated Fock-space cross-check");
  OracleFlags of;
  int cutoff = 0;
  double r = 0.0, nbar = 0.0;
  auto* cutoff_opt = oracle->add_option("--cutoff", cutoff, "Fock basis size D");
  auto* r_opt = oracle->add_option("--r", r, "target squeeze parameter; sets t_max = r/g");
  auto* nbar_opt = oracle->add_option("--nbar", nbar, "thermal occupation of the initial state");
  oracle->add_option("--mode", of.mode, "drive model")->check(CLI::IsMember({"rwa", "full"}));
  oracle->add_option("--samples", of.samples, "number of output samples")->check(CLI::Range(2, 1000000));
  auto* sigma = app.add_subcommand("sigma", "unphysical energy and surface charge");
  auto* classical = app.add_subcommand("classical", "classical mode amplitude");
  std::string branch = "spatial";
  classical->add_option("--branch", branch, "spatial or temporal")->check(CLI::IsMember({"spatial", "temporal"}));
  auto* modes = app.add_subcommand("modes", "list the cavity mode lattice");
  int nmax = 2;
  modes->add_option("--nmax", nmax, "largest |n_i|");
  auto* sweep = app.add_subcommand("sweep", "repeat simulate over values of one parameter");
  SweepFlags sf;
  sweep->add_option("--param", sf.param, "config field, e.g. delta or medium.omega")->required();
  std::string values_text;
  sweep->add_option("--values", values_text, "comma-separated values")->required();
  double fix_r = 0.0;
  auto* fix_r_opt = sweep->add_option("--fix-r", fix_r, "choose t_max per value so that r = g t_max is fixed");
  auto* validate_cmd = app.add_subcommand("validate", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (auto bad = unknown_subcommand(app, argc, argv)) {
      return report_error(err, kUsage, "unknown_subcommand", "unknown subcommand '" + *bad + "'", {{"subcommand", *bad}});
    }
    return report_error(err, kUsage, "usage_error", e.what());
  }

  try {
    Context ctx = make_context(g);
    ctx.log = &out;
    if (simulate->parsed()) {
      run_simulate(ctx, ctx.out, ctx.jobs);
      ctx.say("wrote " + (ctx.out / ("timeseries." + ctx.format)).string());
    } else if (rwa->parsed()) {
      run_table_command(ctx, "rwa", "rwa", rwa_table);
    } else if (sigma->parsed()) {
      run_table_command(ctx, "sigma", "sigma", sigma_table);
    } else if (oracle->parsed()) {
      if (*cutoff_opt) of.cutoff = cutoff;
      if (*r_opt) of.r = r;
      if (*nbar_opt) of.nbar = nbar;
      run_oracle(ctx, of);
    } else if (classical->parsed()) {
      run_classical(ctx, branch);
    } else if (modes->parsed()) {
      run_table_command(ctx, "modes", "modes", [nmax](const SimulationConfig& c) { return modes_table(c, nmax); });
    } else if (sweep->parsed()) {
      if (*fix_r_opt) sf.fix_r = fix_r;
      sf.values = parse_value_list(values_text);
      run_sweep(ctx, sf);
    } else if (validate_cmd->parsed()) {
      run_validate(ctx);
    }
    return kOk;
  } catch (const UsageError& e) {
    return report_error(err, kUsage, "usage_error", e.what());
  } catch (const ConfigError& e) {
    return report_error(err, kConfig, "config_error", e.what(), {{"field", e.field()}});
  } catch (const ConstraintViolation& e) {
    return report_error(err, kConfig, "constraint_violation", e.what(), {{"residual", e.residual()}});
  } catch (const ProfileError& e) {
    return report_error(err, kConfig, "profile_error", e.what());
  } catch (const ValidationFailed& e) {
    return report_error(err, kValidation, "validation_failed", e.what(), {{"failed", e.failed()}});
  } catch (const LeakageError& e) {
    return report_error(err, kRuntime, "oracle_leakage", e.what(), {{"t", e.time()}, {"leakage", e.leakage()}});
  } catch (const RuntimeFailure& e) {
    return report_error(err, kRuntime, "runtime_failure", e.what());
  } catch (const IoError& e) {
    return report_error(err, kIo, "io_error", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, kIo, "io_error", e.what(), {{"path", e.path1().string()}});
  } catch (const std::exception& e) {
    return report_error(err, kRuntime, "internal_error", e.what());
  }
}

}  // namespace tdem::cli
