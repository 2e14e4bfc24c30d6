#pragma once

// Gupta-Bleuler bookkeeping: the initial-state constraint tying timelike
// and longitudinal occupations together, the energy carried by the
// unphysical pair once the medium starts moving, and the resulting surface
// charge density.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>

#include "tdem/bogoliubov.hpp"
#include "tdem/cavity.hpp"
#include "tdem/config.hpp"
#include "tdem/error.hpp"
#include "tdem/permittivity.hpp"
#include "tdem/rwa.hpp"

namespace tdem {

struct InitialOccupation {
  std::array<double, 4> n_bar{};  // per lambda; n_bar[3] must equal n_bar[0]
};

struct ConstraintCheck {
  bool pass = true;
  double residual = 0.0;  // n_bar[3] - n_bar[0]
};

inline ConstraintCheck check_constraint(const InitialOccupation& occ) {
  const double residual = occ.n_bar[3] - occ.n_bar[0];
  return {residual == 0.0, residual};
}

class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(double residual) : Error(describe(residual)), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  static std::string describe(double residual) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "initial state violates the Gupta-Bleuler condition <N3>_0 = <N0>_0 (residual %.6g)",
                  residual);
    return buf;
  }
  double residual_;
};

inline void require_constraint(const InitialOccupation& occ) {
  const auto c = check_constraint(occ);
  if (!c.pass) throw ConstraintViolation(c.residual);
}

/// Raw <a^dag(t) a(t)> for a diagonal initial state with mean n_bar, using
/// [a, a^dag] = -g^{ll}: |u|^2 n + |v|^2 (n + comm). Negative for the
/// timelike vacuum.
inline double raw_number(int lambda, const Coefficients& c, double n_bar) {
  const double comm = lambda == 0 ? -1.0 : 1.0;
  return std::norm(c.u) * n_bar + std::norm(c.v) * (n_bar + comm);
}

/// Photon count reported per polarization. Transverse: n + |v|^2 (1 + 2n).
/// The unphysical pair is reported after the constraint cancellation, each
/// member carrying |v|^2.
inline double reported_number(int lambda, const Coefficients& c, double n_bar) {
  if (lambda == 1 || lambda == 2) return -kMetric[lambda] * raw_number(lambda, c, n_bar);
  return vacuum_number(c, lambda);
}

/// sum_k omega_k(t) (<N3>(t) - <N0>(t)) over the modes in `evolution`,
/// evaluated at output sample `sample`. Needs lambda = 0 and 3 for each mode.
inline double unphysical_energy(const EvolutionResult& evolution, const PermittivityProfile& profile,
                                const InitialOccupation& occ, std::size_t sample) {
  require_constraint(occ);
  if (sample >= evolution.t.size()) throw RuntimeFailure("unphysical_energy: sample outside evolution grid");
  const double t = evolution.t[sample];
  const double eps = profile.eval(t);
  double energy = 0.0;
  bool any = false;
  for (const auto& e3 : evolution.entries) {
    if (e3.lambda != 3) continue;
    const Trajectory* e0 = nullptr;
    for (const auto& cand : evolution.entries) {
      if (cand.lambda == 0 && cand.mode.n == e3.mode.n) e0 = &cand;
    }
    if (e0 == nullptr) {
      throw ConfigError("polarizations", "unphysical energy needs the timelike entry for mode " + to_string(e3.mode.n));
    }
    const double n3 = raw_number(3, {e3.u[sample], e3.v[sample]}, occ.n_bar[3]);
    const double n0 = raw_number(0, {e0->u[sample], e0->v[sample]}, occ.n_bar[0]);
    energy += eigenfrequency(e3.mode, eps) * (n3 - n0);
    any = true;
  }
  if (!any) throw ConfigError("polarizations", "unphysical energy needs lambda = 0 and 3");
  return energy;
}

/// Fundamental frequency of the periodic cube, 2*pi / (L sqrt(eps)).
inline double fundamental_frequency(double epsilon, double L) {
  return 2.0 * std::numbers::pi / (L * std::sqrt(epsilon));
}

/// Surface charge density for a longitudinal pair amplitude |v| = sinh(r).
inline double sigma_from_pair_amplitude(double abs_v, double epsilon, double L) {
  return 2.0 * abs_v * std::pow(epsilon, 0.25) * std::sqrt(std::numbers::pi) / (L * L);
}

struct SurfaceChargeReport {
  double t = 0.0;
  double r = 0.0;
  double unphysical_energy = 0.0;
  double e_longitudinal_rms = 0.0;
  double sigma_natural = 0.0;            // 2 sinh(r) eps^{1/4} sqrt(pi) / L^2
  double sigma_alt_prefactor = 0.0;      // eps * E_rms, reconstructed from the energy
  std::optional<double> sigma_si;        // C m^-2
};

/// Resonant vacuum start. Unphysical energy 2 w1 sinh^2(r); the volume-rms
/// longitudinal field follows from (1/2) eps <E^2> L^3 = energy.
inline SurfaceChargeReport surface_charge(const DriveParams& d, double t, double L,
                                          const std::optional<SiScale>& si = std::nullopt) {
  check_drive(d);
  if (!(L > 0.0)) throw ConfigError("cavity.L", "cavity side must be positive");
  SurfaceChargeReport rep;
  rep.t = t;
  rep.r = squeeze_parameter(d, t);
  const double sh = std::sinh(rep.r);
  const double w1 = fundamental_frequency(d.epsilon, L);
  rep.unphysical_energy = 2.0 * w1 * sh * sh;
  rep.e_longitudinal_rms = std::sqrt(2.0 * rep.unphysical_energy / (d.epsilon * L * L * L));
  rep.sigma_natural = sigma_from_pair_amplitude(sh, d.epsilon, L);
  rep.sigma_alt_prefactor = d.epsilon * rep.e_longitudinal_rms;
  if (si) rep.sigma_si = sigma_to_si(rep.sigma_natural * L * L, *si);
  return rep;
}

}  // namespace tdem
