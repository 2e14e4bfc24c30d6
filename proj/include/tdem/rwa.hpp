#pragma once

// Closed-form rotating-wave results for the resonant sinusoidal drive
// eps(t) = eps + 2*delta*sin(2*Omega*t), Omega = static fundamental frequency.

#include <array>
#include <cmath>
#include <span>

#include "tdem/error.hpp"

namespace tdem {

struct DriveParams {
  double epsilon = 1.0;
  double delta = 0.0;
  double omega = 1.0;
};

inline void check_drive(const DriveParams& d) {
  if (!(d.epsilon > 0.0)) throw ConfigError("medium.epsilon", "must be positive");
  if (!(d.delta >= 0.0)) throw ConfigError("medium.delta", "must be non-negative");
  if (!(2.0 * d.delta < d.epsilon)) {
    throw ConfigError("medium.delta", "permittivity may become non-positive: require 2*delta < epsilon");
  }
}

/// Coefficient of (a^dag a^dag - a a) in the resonant squeeze Hamiltonian, (1/4)(delta/eps)Omega.
inline double rwa_coefficient(double epsilon, double delta, double omega) {
  check_drive({epsilon, delta, omega});
  return 0.25 * (delta / epsilon) * omega;
}

/// g = delta*Omega / (2 eps).
inline double squeeze_rate(const DriveParams& d) {
  check_drive(d);
  return d.delta * d.omega / (2.0 * d.epsilon);
}

inline double squeeze_parameter(const DriveParams& d, double t) { return squeeze_rate(d) * t; }

struct RwaNumbers {
  double r = 0.0;
  std::array<double, 4> per_lambda{};
  double total = 0.0;
};

inline RwaNumbers vacuum_number_rwa(const DriveParams& d, double t, std::span<const int> lambdas) {
  if (!(t >= 0.0)) throw ConfigError("t", "time must be non-negative");
  RwaNumbers out;
  out.r = squeeze_parameter(d, t);
  const double s = std::sinh(out.r);
  for (int l : lambdas) {
    if (l < 0 || l > 3) throw ConfigError("polarizations", "lambda must be in {0,1,2,3}");
    out.per_lambda[l] = s * s;
  }
  for (double n : out.per_lambda) out.total += n;
  return out;
}

inline RwaNumbers vacuum_number_rwa(const DriveParams& d, double t) {
  static constexpr std::array<int, 4> all{0, 1, 2, 3};
  return vacuum_number_rwa(d, t, all);
}

/// Thermal start: n_bar given for the transverse polarizations only; the
/// unphysical pair enters only through its cancellation. Non-fundamental
/// modes keep their initial transverse occupation.
inline RwaNumbers thermal_number_rwa(const DriveParams& d, double t, std::array<double, 2> n_bar_transverse,
                                     bool fundamental = true) {
  for (double n : n_bar_transverse) {
    if (!(n >= 0.0)) throw ConfigError("initial.n_bar", "mean occupation must be non-negative");
  }
  if (!(t >= 0.0)) throw ConfigError("t", "time must be non-negative");
  RwaNumbers out;
  out.r = squeeze_parameter(d, t);
  const double s2 = fundamental ? std::sinh(out.r) * std::sinh(out.r) : 0.0;
  out.per_lambda[0] = s2;
  out.per_lambda[3] = s2;
  for (int l = 1; l <= 2; ++l) {
    const double nb = n_bar_transverse[l - 1];
    out.per_lambda[l] = nb + s2 * (1.0 + 2.0 * nb);
  }
  for (double n : out.per_lambda) out.total += n;
  return out;
}

}  // namespace tdem
