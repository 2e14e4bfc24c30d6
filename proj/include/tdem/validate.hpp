#pragma once

// Fixed-seed invariant suite behind `tdem validate`. Every check is
// deterministic so the report can be diffed between runs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tdem/bogoliubov.hpp"
#include "tdem/cavity.hpp"
#include "tdem/classical.hpp"
#include "tdem/fock_oracle.hpp"
#include "tdem/gupta_bleuler.hpp"
#include "tdem/permittivity.hpp"
#include "tdem/rwa.hpp"

namespace tdem {

struct CheckResult {
  std::string module;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

namespace validation {

inline constexpr double kPi = std::numbers::pi;
inline constexpr unsigned kSeed = 20240611u;

// Uniform double in [lo, hi) from raw engine output (independent of the
// standard library's distribution implementation).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline CheckResult at_most(std::string module, std::string name, double value, double threshold) {
  return {std::move(module), std::move(name), value, threshold, value <= threshold};
}

inline std::vector<CheckResult> permittivity_checks() {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(kSeed);
  const auto p = PermittivityProfile::sinusoidal(4.0, 0.1, 1.3);
  double fd_err = 0.0, sum_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = uniform(rng, 0.0, 20.0);
    const double h = 1e-5;
    const double fd = (p.eval(t + h) - p.eval(t - h)) / (2 * h);
    fd_err = std::max(fd_err, std::abs(fd - p.deriv(t)));
    const auto r = log_derivative_ratios(p, t);
    sum_err = std::max(sum_err, std::abs(r.kappa_dot_over_kappa + r.omega_dot_over_omega));
  }
  out.push_back(at_most("permittivity", "derivative_vs_finite_difference", fd_err, 1e-8));
  out.push_back(at_most("permittivity", "log_ratio_sum", sum_err, 0.0));
  return out;
}

inline std::vector<CheckResult> cavity_checks() {
  std::mt19937_64 rng(kSeed + 1);
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    ModeIndex n{};
    if (i < 10) {
      n = {0, 0, static_cast<int>(rng() % 9) - 4};
      if (n[2] == 0) n[2] = 1;
    } else {
      do {
        n = {static_cast<int>(rng() % 13) - 6, static_cast<int>(rng() % 13) - 6, static_cast<int>(rng() % 13) - 6};
      } while (n[0] == 0 && n[1] == 0);
    }
    const auto m = build_mode(n, 2 * kPi);
    worst = std::max(worst, tetrad_residuals(m, uniform(rng, 1.0, 5.0)).max());
  }
  double norm_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto a = build_mode({static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3)}, 3.0);
    const auto b = build_mode({static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3)}, 3.0);
    norm_worst = std::max(norm_worst, mode_norm_check(a, b, 2.5, 3.0));
  }
  return {at_most("cavity_modes", "tetrad_algebra_60_modes", worst, 1e-12),
          at_most("cavity_modes", "mode_normalization_100_pairs", norm_worst, 1e-12)};
}

inline std::vector<CheckResult> dynamics_checks() {
  std::vector<CheckResult> out;
  const auto fund = build_mode({1, 0, 0}, 2 * kPi);

  {  // static medium
    const auto p = PermittivityProfile::constant(1.0);
    EvolveOptions o;
    o.t_max = 100 * 2 * kPi;
    o.dt = 0.1;
    const auto tr = integrate_trajectory(p, fund, 1, o);
    const auto t = output_times(o);
    double vmax = 0.0, phase = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      vmax = std::max(vmax, std::abs(tr.v[i]));
      phase = std::max(phase, std::abs(tr.u[i] * std::polar(1.0, t[i]) - 1.0));
    }
    out.push_back(at_most("bogoliubov_dynamics", "static_abs_v", vmax, 1e-12));
    out.push_back(at_most("bogoliubov_dynamics", "static_phase_error", phase, 1e-9));
  }
  {  // symplectic sweep
    std::mt19937_64 rng(kSeed + 2);
    double drift = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double eps = uniform(rng, 1.0, 4.0);
      const double ratio = uniform(rng, 1e-4, 1e-2);
      const double w1 = 1.0 / std::sqrt(eps);
      const double omega = w1 * uniform(rng, 0.8, 1.2);
      const int lambda = static_cast<int>(rng() % 4);
      const auto p = PermittivityProfile::sinusoidal(eps, ratio * eps, omega);
      EvolveOptions o;
      o.t_max = 300.0;
      o.dt = 0.05;
      o.output_stride = 1000;
      drift = std::max(drift, integrate_trajectory(p, fund, lambda, o).max_drift);
    }
    out.push_back(at_most("bogoliubov_dynamics", "symplectic_drift_sweep", drift, 1e-9));
  }
  {  // resonant RWA law and polarization equality
    const DriveParams d{1.0, 1e-3, 1.0};
    const auto p = PermittivityProfile::sinusoidal(d.epsilon, d.delta, d.omega);
    const double g = squeeze_rate(d);
    const double strobe = kPi / (2 * d.omega);
    EvolveOptions o;
    o.dt = strobe / 32;
    o.t_max = std::floor(2.0 / g / strobe) * strobe;
    o.output_stride = 32;
    const std::vector<CavityMode> modes{fund, build_mode({2, 0, 0}, 2 * kPi), build_mode({1, 1, 0}, 2 * kPi)};
    const std::vector<int> lambdas{0, 1, 2, 3};
    const auto res = evolve(p, modes, lambdas, o);
    double rel = 0.0, pol = 0.0, off = 0.0;
    const double fund_final = std::norm(res.entries[0].v.back());
    for (const auto& e : res.entries) {
      if (e.mode.n == fund.n) {
        for (std::size_t i = 1; i < res.t.size(); ++i) {
          const double s = std::sinh(g * res.t[i]);
          rel = std::max(rel, std::abs(vacuum_number({e.u[i], e.v[i]}, e.lambda) - s * s) / (s * s));
        }
      } else {
        off = std::max(off, std::norm(e.v.back()) / fund_final);
      }
    }
    for (std::size_t m = 0; m < modes.size(); ++m) {
      for (std::size_t i = 0; i < res.t.size(); ++i) {
        double lo = 1e300, hi = -1e300;
        for (int l = 0; l < 4; ++l) {
          const auto& e = res.entries[m * 4 + l];
          const double n = vacuum_number({e.u[i], e.v[i]}, e.lambda);
          lo = std::min(lo, n);
          hi = std::max(hi, n);
        }
        pol = std::max(pol, hi - lo);
      }
    }
    out.push_back(at_most("bogoliubov_dynamics", "rwa_law_relative_error", rel, 0.05));
    out.push_back(at_most("bogoliubov_dynamics", "polarization_spread", pol, 1e-12));
    out.push_back(at_most("bogoliubov_dynamics", "off_resonance_fraction", off, 0.05));
  }
  return out;
}

inline std::vector<CheckResult> rwa_checks() {
  const DriveParams d{1.0, 0.01, 1.0};
  const double t = 0.5 / squeeze_rate(d);
  const auto th = thermal_number_rwa(d, t, {1.0, 1.0});
  const double s2 = std::pow(std::sinh(0.5), 2);
  return {at_most("rwa_analytics", "coefficient", std::abs(rwa_coefficient(1.0, 0.01, 1.0) - 0.0025), 1e-15),
          at_most("rwa_analytics", "thermal_enhancement", std::abs((th.per_lambda[1] - 1.0) / s2 - 3.0), 1e-12)};
}

inline std::vector<CheckResult> oracle_checks() {
  std::vector<CheckResult> out;
  const DriveParams d{1.0, 1e-3, 1.0};
  const double strength = rwa_coefficient(d.epsilon, d.delta, d.omega);
  const double t = 0.5 / squeeze_rate(d);
  OracleOptions oo;
  oo.cutoff = 40;
  oo.t_max = t;
  oo.samples = 11;
  const auto vac = evolve_oracle(RwaDrive{strength}, VacuumState{}, oo);
  const double s2 = std::pow(std::sinh(0.5), 2);
  out.push_back(at_most("fock_oracle", "vacuum_vs_sinh2", std::abs(vac.n.back() - s2), 1e-6));

  EvolveOptions eo;
  eo.frame = Frame::RwaEnvelope;
  eo.t_max = t;
  eo.dt = t / 100;
  const auto env = integrate_trajectory(PermittivityProfile::sinusoidal(d.epsilon, d.delta, d.omega),
                                        build_mode({1, 0, 0}, 2 * kPi), 3, eo);
  out.push_back(at_most("fock_oracle", "vacuum_vs_dynamics", std::abs(vac.n.back() - std::norm(env.v.back())), 1e-6));

  oo.cutoff = 60;
  oo.leakage_threshold = 1e-4;
  const auto th = evolve_oracle(RwaDrive{strength}, ThermalState{1.0}, oo);
  out.push_back(at_most("fock_oracle", "thermal_relative_error", std::abs(th.n.back() / (1.0 + 3.0 * s2) - 1.0), 0.01));
  out.push_back(at_most("fock_oracle", "commutator_residual", verify_commutator_metric(+1, 10).residual, 1e-12));
  return out;
}

inline std::vector<CheckResult> gupta_bleuler_checks() {
  std::vector<CheckResult> out;
  const auto p = PermittivityProfile::sinusoidal(1.0, 1e-3, 1.0);
  EvolveOptions o;
  o.t_max = 50.0;
  o.dt = 0.05;
  const std::vector<CavityMode> modes{build_mode({1, 0, 0}, 2 * kPi), build_mode({0, 1, 1}, 2 * kPi)};
  const std::vector<int> lambdas{0, 3};
  const auto res = evolve(p, modes, lambdas, o);
  double worst = 0.0;
  for (double n : {0.0, 0.3, 1.0, 7.5}) {
    worst = std::max(worst, std::abs(unphysical_energy(res, p, InitialOccupation{{n, 0.5, 0.5, n}}, 0)));
  }
  out.push_back(at_most("gb_observables", "initial_unphysical_energy", worst, 0.0));
  int rejected = 0;
  for (double bad : {0.1, -0.2, 1e-12}) {
    try {
      unphysical_energy(res, p, InitialOccupation{{0.0, 0.0, 0.0, bad}}, 0);
    } catch (const ConstraintViolation&) {
      ++rejected;
    }
  }
  out.push_back(at_most("gb_observables", "violations_accepted", 3.0 - rejected, 0.0));

  SiScale si;
  si.L_meters = 0.1;
  const auto rep = surface_charge({1.0, 1e-8, 1e9}, 1.0, 1.0, si);
  const double s = rep.sigma_si.value_or(0.0);
  out.push_back({"gb_observables", "paper_sigma_si_in_band", s, 1e-13, s >= 1e-15 && s <= 1e-13});
  return out;
}

inline std::vector<CheckResult> classical_checks() {
  std::vector<CheckResult> out;
  const auto p = PermittivityProfile::sinusoidal(1.0, 1e-3, 1.0);
  const auto g = parametric_growth_rate(p, 1.0, 3.5 / 5e-4);
  out.push_back(at_most("classical_modes", "growth_rate_relative_error", std::abs(g.mu / g.expected - 1.0), 0.1));
  const double ramp = 500 * 2 * kPi;
  const auto prof = make_ramp_profile(1.0, 4.0, ramp, 20 * 2 * kPi);
  const auto a = adiabatic_amplitude_check(prof, 1.0, ramp + 40 * 2 * kPi, ramp);
  out.push_back(at_most("classical_modes", "adiabatic_exponent_error", std::abs(a.exponent + 0.25), 0.02));
  return out;
}

}  // namespace validation

inline std::vector<CheckResult> run_validation_suite() {
  std::vector<CheckResult> all;
  for (auto&& part : {validation::permittivity_checks(), validation::cavity_checks(), validation::dynamics_checks(),
                      validation::rwa_checks(), validation::oracle_checks(), validation::gupta_bleuler_checks(),
                      validation::classical_checks()}) {
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace tdem
