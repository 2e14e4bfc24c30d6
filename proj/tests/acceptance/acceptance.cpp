// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tdem/cli.hpp"
#include "tdem/tdem.hpp"

namespace {

using namespace tdem;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return validation::uniform(rng, lo, hi); }

Verdict static_medium() {
  const auto p = PermittivityProfile::constant(1.0);
  double vmax = 0.0, phase = 0.0;
  for (const ModeIndex n : {ModeIndex{1, 0, 0}, ModeIndex{0, 0, 3}, ModeIndex{2, -1, 4}}) {
    const auto m = build_mode(n, 2 * kPi);
    EvolveOptions o;
    o.t_max = 100 * 2 * kPi / m.k_norm;
    o.dt = 0.1 / m.k_norm;
    o.output_stride = 10;
    const auto t = output_times(o);
    for (int lambda = 0; lambda < 4; ++lambda) {
      const auto tr = integrate_trajectory(p, m, lambda, o);
      for (std::size_t i = 0; i < t.size(); ++i) {
        vmax = std::max(vmax, std::abs(tr.v[i]));
        phase = std::max(phase, std::abs(tr.u[i] * std::polar(1.0, m.k_norm * t[i]) - 1.0));
      }
    }
  }
  return {vmax < 1e-12 && phase < 1e-9, fmt("max|v|=%.3e phase_err=%.3e", vmax, phase)};
}

Verdict symplectic_sweep() {
  std::mt19937_64 rng(validation::kSeed + 100);
  double drift = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double eps = uniform(rng, 1.0, 4.0);
    const double delta = uniform(rng, 0.0, 1e-2) * eps;
    const double omega = uniform(rng, 0.5, 2.0) / std::sqrt(eps);
    const int lambda = static_cast<int>(rng() % 4);
    const auto p = PermittivityProfile::sinusoidal(eps, delta, omega);
    EvolveOptions o;
    o.t_max = 2000.0;
    o.dt = 0.05;
    o.output_stride = 1000;
    drift = std::max(drift, integrate_trajectory(p, build_mode({1, 0, 0}, 2 * kPi), lambda, o).max_drift);
  }
  return {drift <= 1e-9, fmt("max drift=%.3e", drift)};
}

struct ResonantRun {
  DriveParams drive{1.0, 1e-3, 1.0};
  EvolutionResult result;
};

const ResonantRun& resonant_run() {
  static const ResonantRun run = [] {
    ResonantRun r;
    const auto p = PermittivityProfile::sinusoidal(r.drive.epsilon, r.drive.delta, r.drive.omega);
    const double g = squeeze_rate(r.drive);
    const double strobe = kPi / (2 * r.drive.omega);
    EvolveOptions o;
    o.dt = strobe / 32;
    o.t_max = std::floor(2.0 / g / strobe) * strobe;
    o.output_stride = 32;
    const std::vector<CavityMode> modes{build_mode({1, 0, 0}, 2 * kPi), build_mode({2, 0, 0}, 2 * kPi),
                                        build_mode({1, 1, 0}, 2 * kPi), build_mode({1, 1, 1}, 2 * kPi)};
    const std::vector<int> lambdas{0, 1, 2, 3};
    r.result = evolve(p, modes, lambdas, o);
    return r;
  }();
  return run;
}

Verdict rwa_law() {
  const auto& run = resonant_run();
  const double g = squeeze_rate(run.drive);
  double rel = 0.0, r_max = 0.0;
  for (const auto& e : run.result.entries) {
    if (e.mode.n != ModeIndex{1, 0, 0}) continue;
    for (std::size_t i = 1; i < run.result.t.size(); ++i) {
      const double s = std::sinh(g * run.result.t[i]);
      rel = std::max(rel, std::abs(std::norm(e.v[i]) - s * s) / (s * s));
      r_max = std::max(r_max, g * run.result.t[i]);
    }
  }
  return {rel <= 0.05 && r_max > 1.9, fmt("max rel err=%.3e up to r=%.3f", rel, r_max)};
}

Verdict polarization_equality() {
  const auto& res = resonant_run().result;
  double spread = 0.0;
  const std::size_t modes = res.entries.size() / 4;
  for (std::size_t m = 0; m < modes; ++m) {
    for (std::size_t i = 0; i < res.t.size(); ++i) {
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          const auto& ea = res.entries[m * 4 + a];
          const auto& eb = res.entries[m * 4 + b];
          spread = std::max(spread, std::abs(vacuum_number({ea.u[i], ea.v[i]}, ea.lambda) -
                                             vacuum_number({eb.u[i], eb.v[i]}, eb.lambda)));
        }
      }
    }
  }
  return {spread <= 1e-12, fmt("max pairwise difference=%.3e", spread)};
}

Verdict oracle_equivalence() {
  const DriveParams d{1.0, 1e-3, 1.0};
  const double strength = rwa_coefficient(d.epsilon, d.delta, d.omega);
  const double t = 0.5 / squeeze_rate(d);
  OracleOptions oo;
  oo.cutoff = 40;
  oo.t_max = t;
  oo.samples = 11;
  const auto vac = evolve_oracle(RwaDrive{strength}, VacuumState{}, oo);
  const double s2 = std::pow(std::sinh(0.5), 2);
  const double e_closed = std::abs(vac.n.back() - s2);

  EvolveOptions eo;
  eo.frame = Frame::RwaEnvelope;
  eo.t_max = t;
  eo.dt = t / 100;
  double e_dyn = 0.0;
  const auto p = PermittivityProfile::sinusoidal(d.epsilon, d.delta, d.omega);
  for (int lambda = 0; lambda < 4; ++lambda) {
    const auto tr = integrate_trajectory(p, build_mode({1, 0, 0}, 2 * kPi), lambda, eo);
    e_dyn = std::max(e_dyn, std::abs(vac.n.back() - std::norm(tr.v.back())));
  }

  oo.cutoff = 60;
  oo.leakage_threshold = 1e-4;
  const auto th = evolve_oracle(RwaDrive{strength}, ThermalState{1.0}, oo);
  const double e_th = std::abs((th.n.back() - 1.0) / s2 / 3.0 - 1.0);
  return {e_closed <= 1e-6 && e_dyn <= 1e-6 && e_th <= 0.01,
          fmt("|N-sinh2|=%.3e |N-|v|2|=%.3e thermal rel=%.3e", e_closed, e_dyn, e_th)};
}

Verdict gupta_bleuler() {
  const auto p = PermittivityProfile::sinusoidal(1.0, 1e-3, 1.0);
  EvolveOptions o;
  o.t_max = 20.0;
  o.dt = 0.02;
  const std::vector<CavityMode> modes{build_mode({1, 0, 0}, 2 * kPi), build_mode({0, 2, 1}, 2 * kPi)};
  const std::vector<int> lambdas{0, 1, 2, 3};
  const auto res = evolve(p, modes, lambdas, o);
  std::mt19937_64 rng(validation::kSeed + 101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double n = i == 0 ? 0.0 : uniform(rng, 0.0, 50.0);
    const InitialOccupation occ{{n, uniform(rng, 0.0, 5.0), uniform(rng, 0.0, 5.0), n}};
    worst = std::max(worst, std::abs(unphysical_energy(res, p, occ, 0)));
  }
  int accepted = 0;
  for (int i = 0; i < 50; ++i) {
    const double n0 = uniform(rng, 0.0, 5.0);
    const double n3 = n0 + (i % 2 ? 1.0 : -1.0) * uniform(rng, 1e-9, 1.0);
    try {
      unphysical_energy(res, p, InitialOccupation{{n0, 0.0, 0.0, n3}}, 0);
      ++accepted;
    } catch (const ConstraintViolation&) {
    }
  }
  return {worst == 0.0 && accepted == 0, fmt("max |E_unphys(0)|=%.3e violating accepted=%.0f", worst, accepted)};
}

Verdict surface_charge_number() {
  SiScale si;
  si.L_meters = 0.1;
  const auto rep = surface_charge({1.0, 1e-8, 1e9}, 1.0, 1.0, si);
  const double s = rep.sigma_si.value_or(0.0);
  return {s >= 1e-15 && s <= 1e-13, fmt("sigma_si=%.6e C/m^2", s)};
}

Verdict tetrad_algebra() {
  std::mt19937_64 rng(validation::kSeed + 102);
  double worst = 0.0, null_worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    ModeIndex n{};
    if (i < 15) {
      n = {0, 0, 0};
      n[i % 3] = static_cast<int>(rng() % 5) + 1;
      if (i % 2) n[i % 3] = -n[i % 3];
    } else {
      do {
        n = {static_cast<int>(rng() % 15) - 7, static_cast<int>(rng() % 15) - 7, static_cast<int>(rng() % 15) - 7};
      } while (n == ModeIndex{0, 0, 0});
    }
    const auto m = build_mode(n, uniform(rng, 0.5, 10.0));
    const auto r = tetrad_residuals(m, uniform(rng, 1.0, 5.0));
    worst = std::max(worst, r.max());
    null_worst = std::max(null_worst, r.null_norm);
  }
  return {worst <= 1e-12, fmt("max residual=%.3e (null %.3e)", worst, null_worst)};
}

Verdict classical_resonance() {
  const auto p = PermittivityProfile::sinusoidal(1.0, 1e-3, 1.0);
  double err = 0.0;
  for (Branch b : {Branch::Spatial, Branch::Temporal}) {
    const auto g = parametric_growth_rate(p, 1.0, 3.5 / 5e-4, b);
    err = std::max(err, std::abs(g.mu / g.expected - 1.0));
  }
  const double ramp = 500 * 2 * kPi;
  const auto prof = make_ramp_profile(1.0, 4.0, ramp, 20 * 2 * kPi);
  const auto a = adiabatic_amplitude_check(prof, 1.0, ramp + 40 * 2 * kPi, ramp);
  const double e_p = std::abs(a.exponent + 0.25);
  return {err <= 0.1 && e_p <= 0.02 && !a.inconclusive, fmt("mu rel err=%.3e exponent=%.5f", err, a.exponent)};
}

Verdict off_resonance() {
  const auto& res = resonant_run().result;
  double fund = 0.0, worst = 0.0;
  for (const auto& e : res.entries)
    if (e.mode.n == ModeIndex{1, 0, 0}) fund = std::max(fund, std::norm(e.v.back()));
  for (const auto& e : res.entries)
    if (e.mode.n != ModeIndex{1, 0, 0}) worst = std::max(worst, std::norm(e.v.back()) / fund);
  return {worst < 0.05, fmt("max non-fundamental fraction=%.3e", worst)};
}

Verdict determinism() {
  const auto base = fs::temp_directory_path() / "tdem_acceptance";
  fs::remove_all(base);
  std::vector<std::string> reports;
  for (const char* run : {"a", "b"}) {
    const std::string dir = (base / run).string();
    const char* argv[] = {"tdem", "validate", "--quiet", "--output", dir.c_str()};
    std::ostringstream out, err;
    const int code = cli::dispatch(5, argv, out, err);
    if (code != 0) return {false, "validate exited with " + std::to_string(code) + ": " + err.str()};
    reports.push_back(io::read_file(base / run / "validate_report.csv"));
  }
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  return {same, same ? "validate_report.csv identical (" + std::to_string(reports[0].size()) + " bytes)"
                     : "validate_report.csv differs between runs"};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0 means no limit
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "static-medium reduction", 1.0, static_medium},
      {2, "symplectic invariant", 30.0, symplectic_sweep},
      {3, "RWA law", 0.0, rwa_law},
      {4, "equal polarization contributions", 0.0, polarization_equality},
      {5, "Fock-oracle equivalence", 0.0, oracle_equivalence},
      {6, "Gupta-Bleuler cancellation", 0.0, gupta_bleuler},
      {7, "surface charge", 1.0, surface_charge_number},
      {8, "tetrad algebra", 0.0, tetrad_algebra},
      {9, "classical parametric resonance", 60.0, classical_resonance},
      {10, "off-resonance control", 0.0, off_resonance},
      {11, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += fmt(" runtime limit %.0f s exceeded", c.time_limit_s);
    }
    std::printf("%s %2d %s: %s [%.3f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
