#pragma once

// Per-mode classical reduction of the gauge-fixed wave equations with a
// plane-wave ansatz A ~ q(t) e^{i k.x}:
//
//   temporal:  eps q'' + 2 eps' q' + eps'' q + k^2 q = 0
//   spatial:   eps q'' +   eps' q'           + k^2 q = 0
//
// plus envelope extraction and the two measurements built on it: the
// adiabatic amplitude exponent under a slow ramp and the parametric growth
// rate under the resonant sinusoidal drive.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "tdem/error.hpp"
#include "tdem/permittivity.hpp"

namespace tdem {

enum class Branch { Temporal, Spatial };

inline const char* to_string(Branch b) { return b == Branch::Temporal ? "temporal" : "spatial"; }

struct ClassicalModeState {
  std::complex<double> q{1.0, 0.0};
  std::complex<double> q_dot{0.0, 0.0};
};

struct ClassicalRates {
  std::complex<double> dq;
  std::complex<double> dq_dot;
};

inline ClassicalRates classical_rhs(const ClassicalModeState& s, Branch branch, const PermittivityProfile& profile,
                                    double k_norm, double t) {
  const auto e = profile.sample(t);
  const double k2 = k_norm * k_norm;
  std::complex<double> acc;
  if (branch == Branch::Spatial) {
    acc = -(e.deriv * s.q_dot + k2 * s.q) / e.value;
  } else {
    acc = -(2.0 * e.deriv * s.q_dot + (e.deriv2 + k2) * s.q) / e.value;
  }
  return {s.q_dot, acc};
}

/// Coefficient of q' in q'' + gamma q' + ... = 0; positive means damping.
inline double damping_coefficient(Branch branch, const PermittivityProfile& profile, double t) {
  const auto e = profile.sample(t);
  return (branch == Branch::Spatial ? 1.0 : 2.0) * e.deriv / e.value;
}

/// (1/2) eps |q'|^2 + (1/2) k^2 |q|^2.
inline double mode_energy(const ClassicalModeState& s, double epsilon, double k_norm) {
  return 0.5 * epsilon * std::norm(s.q_dot) + 0.5 * k_norm * k_norm * std::norm(s.q);
}

struct ClassicalTrajectory {
  Branch branch = Branch::Spatial;
  double k_norm = 1.0;
  std::vector<double> t;
  std::vector<ClassicalModeState> states;
};

/// Fixed-step RK4 from t0 over [t0, t0 + duration]; records every `stride` steps.
inline ClassicalTrajectory integrate_classical(const PermittivityProfile& profile, Branch branch, double k_norm,
                                               ClassicalModeState initial, double duration, double dt,
                                               std::size_t stride = 1, double t0 = 0.0) {
  if (!(dt > 0.0)) throw ConfigError("dt", "step must be positive");
  if (!(duration >= 0.0)) throw ConfigError("t_max", "must be non-negative");
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : duration / static_cast<double>(steps);
  stride = std::max<std::size_t>(1, stride);

  ClassicalTrajectory tr;
  tr.branch = branch;
  tr.k_norm = k_norm;
  tr.t.reserve(steps / stride + 2);
  tr.states.reserve(steps / stride + 2);
  tr.t.push_back(t0);
  tr.states.push_back(initial);

  auto f = [&](double t, const ClassicalModeState& s) { return classical_rhs(s, branch, profile, k_norm, t); };
  auto add = [](const ClassicalModeState& s, const ClassicalRates& r, double a) {
    return ClassicalModeState{s.q + a * r.dq, s.q_dot + a * r.dq_dot};
  };
  ClassicalModeState s = initial;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    const auto k1 = f(t, s);
    const auto k2 = f(t + 0.5 * h, add(s, k1, 0.5 * h));
    const auto k3 = f(t + 0.5 * h, add(s, k2, 0.5 * h));
    const auto k4 = f(t + h, add(s, k3, h));
    s.q += h / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    s.q_dot += h / 6.0 * (k1.dq_dot + 2.0 * k2.dq_dot + 2.0 * k3.dq_dot + k4.dq_dot);
    if ((n + 1) % stride == 0 || n + 1 == steps) {
      tr.t.push_back(t0 + static_cast<double>(n + 1) * h);
      tr.states.push_back(s);
    }
  }
  return tr;
}

struct EnvelopePeak {
  double t;
  double amplitude;
};

/// Successive local maxima of |q|, refined by a parabola through the three
/// samples around each maximum.
inline std::vector<EnvelopePeak> envelope_peaks(const ClassicalTrajectory& tr) {
  std::vector<EnvelopePeak> peaks;
  const std::size_t n = tr.states.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y0 = std::abs(tr.states[i - 1].q);
    const double y1 = std::abs(tr.states[i].q);
    const double y2 = std::abs(tr.states[i + 1].q);
    if (!(y1 > y0 && y1 >= y2)) continue;
    const double denom = y0 - 2.0 * y1 + y2;
    double offset = 0.0;
    double amp = y1;
    if (denom < 0.0) {
      offset = 0.5 * (y0 - y2) / denom;
      amp = y1 - 0.25 * (y0 - y2) * offset;
    }
    const double h = tr.t[i + 1] - tr.t[i];
    peaks.push_back({tr.t[i] + offset * h, amp});
  }
  return peaks;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  fit.points = x.size();
  if (x.size() != y.size() || x.size() < 2) return fit;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

/// Smooth monotone ramp eps_from -> eps_to over [pad, pad + ramp_time]
/// (cosine easing), flat for `pad` on either side, sampled for a tabulated profile.
inline PermittivityProfile make_ramp_profile(double eps_from, double eps_to, double ramp_time, double pad,
                                             std::size_t samples = 20001) {
  std::vector<double> t(samples), e(samples);
  const double total = ramp_time + 2.0 * pad;
  for (std::size_t i = 0; i < samples; ++i) {
    const double ti = total * static_cast<double>(i) / static_cast<double>(samples - 1);
    double x = std::clamp((ti - pad) / ramp_time, 0.0, 1.0);
    const double w = 0.5 - 0.5 * std::cos(std::numbers::pi * x);
    t[i] = ti;
    e[i] = eps_from + (eps_to - eps_from) * w;
  }
  return PermittivityProfile::tabulated(std::move(t), std::move(e));
}

struct AdiabaticResult {
  double exponent = 0.0;         // fitted p in amplitude ~ eps^p
  double r2 = 0.0;
  double amplitude_ratio = 1.0;  // final / initial envelope
  double epsilon_ratio = 1.0;
  bool inconclusive = false;
};

/// Spatial-branch envelope vs eps over the full support of `profile`,
/// starting from q = 1, q' = 0. The ramp must span at least 100 periods of
/// the fastest oscillation, otherwise the result is flagged inconclusive.
inline AdiabaticResult adiabatic_amplitude_check(const PermittivityProfile& profile, double k_norm,
                                                 double duration, double ramp_time, double dt = 0.01) {
  AdiabaticResult res;
  const double omega_max = k_norm / std::sqrt(profile.min_value());
  const double period = 2.0 * std::numbers::pi / omega_max;
  res.inconclusive = ramp_time < 100.0 * period;

  const auto tr = integrate_classical(profile, Branch::Spatial, k_norm, {}, duration, dt);
  const auto peaks = envelope_peaks(tr);
  if (peaks.size() < 4) {
    res.inconclusive = true;
    return res;
  }
  std::vector<double> x, y;
  x.reserve(peaks.size());
  y.reserve(peaks.size());
  for (const auto& p : peaks) {
    x.push_back(std::log(profile.eval(p.t)));
    y.push_back(std::log(p.amplitude));
  }
  const auto fit = least_squares(x, y);
  res.exponent = fit.slope;
  res.r2 = fit.r2;
  res.amplitude_ratio = peaks.back().amplitude / peaks.front().amplitude;
  res.epsilon_ratio = profile.eval(peaks.back().t) / profile.eval(peaks.front().t);
  if (std::abs(std::log(res.epsilon_ratio)) < 1e-12) {
    // No ramp: the exponent is defined as the (zero) log-amplitude change.
    res.exponent = 0.0;
    res.r2 = 1.0;
  }
  return res;
}

struct GrowthResult {
  double mu = 0.0;        // fitted exponential rate of the |q| envelope
  double r2 = 0.0;
  double expected = 0.0;  // delta*Omega / (2 eps)
  double fit_start = 0.0;
  std::vector<EnvelopePeak> peaks;
  bool inconclusive = false;
};

/// Fits log|q| envelope maxima against t from r = g t >= 1 onwards (from
/// t_max/3 when the drive is off). Starts from q = 1, q' = omega_static so
/// both Floquet quadratures are populated whatever the branch: with a sine
/// drive the growing quadrature is cos for one branch and sin for the other.
inline GrowthResult parametric_growth_rate(const PermittivityProfile& profile, double k_norm, double t_max,
                                           Branch branch = Branch::Spatial, double dt = 0.01) {
  if (profile.kind() != PermittivityProfile::Kind::Sinusoidal && profile.kind() != PermittivityProfile::Kind::Constant) {
    throw ConfigError("medium", "growth-rate fit needs a sinusoidal (or constant) profile");
  }
  if (!(profile.delta() / profile.epsilon_static() <= 1e-2)) {
    throw ConfigError("medium.delta", "growth-rate fit requires delta/epsilon <= 1e-2");
  }
  GrowthResult res;
  res.expected = std::abs(profile.delta()) * profile.drive_omega() / (2.0 * profile.epsilon_static());
  res.fit_start = res.expected > 0.0 ? std::min(1.0 / res.expected, t_max / 3.0) : t_max / 3.0;

  const double omega_static = k_norm / std::sqrt(profile.epsilon_static());
  const auto tr = integrate_classical(profile, branch, k_norm, {1.0, omega_static}, t_max, dt);
  res.peaks = envelope_peaks(tr);
  std::vector<double> x, y;
  for (const auto& p : res.peaks) {
    if (p.t < res.fit_start) continue;
    x.push_back(p.t);
    y.push_back(std::log(p.amplitude));
  }
  const auto fit = least_squares(x, y);
  res.mu = fit.slope;
  res.r2 = fit.r2;
  res.inconclusive = fit.points < 3 || fit.r2 < 0.99;
  return res;
}

}  // namespace tdem
