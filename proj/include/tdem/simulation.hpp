#pragma once

// Builds the runtime objects described by a SimulationConfig.

#include <vector>

#include "tdem/bogoliubov.hpp"
#include "tdem/cavity.hpp"
#include "tdem/config.hpp"
#include "tdem/gupta_bleuler.hpp"
#include "tdem/permittivity.hpp"
#include "tdem/rwa.hpp"

namespace tdem {

inline SimulationConfig default_config() {
  SimulationConfig c;
  c.cavity_side_L = 2.0 * std::numbers::pi;  // fundamental frequency 1 at eps = 1
  c.epsilon_static = 1.0;
  c.delta = 1e-3;
  c.drive_omega = 1.0;
  c.t_max = 1000.0;
  c.dt = 0.05;
  c.output_stride = 100;
  return c;
}

inline PermittivityProfile make_profile(const SimulationConfig& c) {
  if (c.table_path) return PermittivityProfile::load_csv(*c.table_path);
  if (c.delta == 0.0) return PermittivityProfile::constant(c.epsilon_static);
  return PermittivityProfile::sinusoidal(c.epsilon_static, c.delta, c.drive_omega);
}

inline std::vector<CavityMode> make_modes(const SimulationConfig& c) {
  std::vector<CavityMode> modes;
  modes.reserve(c.mode_list.size());
  for (const auto& n : c.mode_list) modes.push_back(build_mode(n, c.cavity_side_L));
  return modes;
}

inline EvolveOptions make_evolve_options(const SimulationConfig& c, unsigned jobs = 1) {
  EvolveOptions o;
  o.t_max = c.t_max;
  o.dt = c.dt;
  o.output_stride = c.output_stride;
  o.drift_tolerance = c.tolerance("symplectic");
  o.max_step_phase = c.tolerance("max_step_phase");
  o.jobs = jobs;
  return o;
}

inline DriveParams drive_params(const SimulationConfig& c) { return {c.epsilon_static, c.delta, c.drive_omega}; }

inline InitialOccupation initial_occupation(const SimulationConfig& c) { return {c.initial_occupations}; }

/// Full dynamics run for a configuration.
inline EvolutionResult evolve(const SimulationConfig& c, unsigned jobs = 1) {
  require_constraint(initial_occupation(c));
  const auto profile = make_profile(c);
  const auto modes = make_modes(c);
  return evolve(profile, modes, c.polarizations, make_evolve_options(c, jobs));
}

}  // namespace tdem
