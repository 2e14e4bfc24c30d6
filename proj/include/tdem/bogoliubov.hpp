#pragma once

// Heisenberg evolution of the cavity ladder operators in a time-dependent
// medium, reduced to Bogoliubov coefficients: a(t) = u(t) a + v(t) a^dagger.
//
//   du/dt = -i w u + s (w'/2w) conj(v)
//   dv/dt = -i w v + s (w'/2w) conj(u)
//
// with s = +1 for the timelike polarization and s = -1 for lambda = 1,2,3.
// |u|^2 - |v|^2 is conserved exactly by the flow for either sign.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <future>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "tdem/cavity.hpp"
#include "tdem/error.hpp"
#include "tdem/permittivity.hpp"

namespace tdem {

using cplx = std::complex<double>;

/// Sign of the anomalous coupling in the evolution equations.
inline int coupling_sign(int lambda) {
  if (lambda < 0 || lambda > 3) throw ConfigError("polarizations", "lambda must be in {0,1,2,3}");
  return lambda == 0 ? +1 : -1;
}

struct Coefficients {
  cplx u{1.0, 0.0};
  cplx v{0.0, 0.0};
};

struct CoefficientRates {
  cplx du;
  cplx dv;
};

inline CoefficientRates rhs(cplx u, cplx v, double omega, double omega_dot_over_omega, int sign) {
  if (!(omega > 0.0)) throw RuntimeFailure("rhs: frequency must be positive");
  const double c = 0.5 * omega_dot_over_omega * sign;
  const cplx mi_w{0.0, -omega};
  return {mi_w * u + c * std::conj(v), mi_w * v + c * std::conj(u)};
}

inline double symplectic_residual(const Coefficients& c) {
  return std::norm(c.u) - std::norm(c.v) - 1.0;
}

enum class Frame {
  Lab,          // integrate (u, v) directly
  Rotating,     // integrate envelopes U = u e^{i theta}, V = v e^{i theta}, theta = int w
  RwaEnvelope,  // constant-coefficient resonant envelope (rotating-wave limit)
};

enum class Stepper {
  Magnus4,  // fourth-order Gauss-Magnus; exact su(1,1) exponential per step
  Rk4,      // classic Runge-Kutta, lab frame only
};

struct EvolveOptions {
  double t_max = 0.0;
  double dt = 0.1;
  Frame frame = Frame::Lab;
  Stepper stepper = Stepper::Magnus4;
  std::size_t output_stride = 1;
  double max_step_phase = 0.1;      // dt * max(omega) bound (lab frame)
  double drift_tolerance = 1e-9;    // hard failure above this
  double resonance_tolerance = 1e-9;  // relative |omega_k - Omega| for the RWA envelope frame
  unsigned jobs = 1;
};

struct Trajectory {
  CavityMode mode;
  int lambda = 0;
  int sign = -1;
  std::vector<cplx> u;
  std::vector<cplx> v;
  double max_drift = 0.0;
};

struct EvolutionResult {
  std::vector<double> t;
  std::vector<Trajectory> entries;
  double max_drift = 0.0;
  std::size_t steps = 0;
};

namespace detail {

// 2x2 complex matrix acting on w = (u, conj(v)).
struct Mat2 {
  cplx a, b, c, d;  // [[a, b], [c, d]]

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

inline Mat2 commutator(const Mat2& x, const Mat2& y) {
  const Mat2 xy = x * y;
  const Mat2 yx = y * x;
  return {xy.a - yx.a, xy.b - yx.b, xy.c - yx.c, xy.d - yx.d};
}

// exp of a traceless 2x2 matrix: N^2 = -det(N) I.
inline Mat2 expm_traceless(const Mat2& n) {
  const cplx q2 = -(n.a * n.d - n.b * n.c);
  cplx ch, sh_over_q;
  if (std::abs(q2) < 1e-8) {
    ch = 1.0 + q2 / 2.0 + q2 * q2 / 24.0;
    sh_over_q = 1.0 + q2 / 6.0 + q2 * q2 / 120.0;
  } else {
    const cplx q = std::sqrt(q2);
    ch = std::cosh(q);
    sh_over_q = std::sinh(q) / q;
  }
  return {ch + sh_over_q * n.a, sh_over_q * n.b, sh_over_q * n.c, ch + sh_over_q * n.d};
}

// Gauss-Legendre 3-point integral of omega over [t0, t0 + h].
inline double integrate_omega(const PermittivityProfile& p, const CavityMode& m, double t0, double h) {
  static constexpr double x = 0.7745966692414834;  // sqrt(3/5)
  const double mid = t0 + 0.5 * h;
  const double half = 0.5 * h;
  return half * (5.0 / 9.0 * eigenfrequency(m, p.eval(mid - half * x)) +
                 8.0 / 9.0 * eigenfrequency(m, p.eval(mid)) +
                 5.0 / 9.0 * eigenfrequency(m, p.eval(mid + half * x)));
}

class TrajectoryIntegrator {
 public:
  TrajectoryIntegrator(const PermittivityProfile& profile, const CavityMode& mode, int sign,
                       const EvolveOptions& opts)
      : profile_(profile), mode_(mode), sign_(sign), opts_(opts) {
    if (opts_.frame == Frame::RwaEnvelope) {
      if (profile_.kind() != PermittivityProfile::Kind::Sinusoidal &&
          profile_.kind() != PermittivityProfile::Kind::Constant) {
        throw ConfigError("frame", "RWA envelope needs a constant or sinusoidal profile");
      }
      omega_static_ = eigenfrequency(mode_, profile_.epsilon_static());
      const double drive = profile_.drive_omega();
      const bool resonant = profile_.kind() == PermittivityProfile::Kind::Sinusoidal &&
                            std::abs(omega_static_ - drive) <= opts_.resonance_tolerance * omega_static_;
      const double g = resonant ? profile_.delta() * drive / (2.0 * profile_.epsilon_static()) : 0.0;
      kappa_ = -sign_ * g;
    }
  }

  // Generator of d/dt (U, conj V) at time t; theta is the accumulated phase.
  Mat2 generator(double t, double theta) const {
    const auto s = profile_.sample(t);
    const double omega = mode_.k_norm / std::sqrt(s.value);
    const double c = sign_ * 0.5 * (-s.deriv / (2.0 * s.value));  // s * (w'/w) / 2
    switch (opts_.frame) {
      case Frame::Lab:
        return {cplx(0.0, -omega), c, c, cplx(0.0, omega)};
      case Frame::Rotating: {
        const cplx ph = std::polar(1.0, 2.0 * theta);
        return {0.0, c * ph, c * std::conj(ph), 0.0};
      }
      case Frame::RwaEnvelope:
        return {0.0, kappa_, kappa_, 0.0};
    }
    return {};
  }

  double omega_at(double t) const { return eigenfrequency(mode_, profile_.eval(t)); }

  // One step from t with step h. w = (U, conj V) in the integration frame; theta advanced in place.
  void step(std::array<cplx, 2>& w, double t, double h, double& theta) const {
    if (opts_.stepper == Stepper::Rk4) {
      step_rk4(w, t, h);
      theta += integrate_omega(profile_, mode_, t, h);
      return;
    }
    static constexpr double off = 0.28867513459481287;  // sqrt(3)/6
    const double t1 = t + (0.5 - off) * h;
    const double t2 = t + (0.5 + off) * h;
    double th1 = theta, th2 = theta;
    if (opts_.frame == Frame::Rotating) {
      th1 += integrate_omega(profile_, mode_, t, (0.5 - off) * h);
      th2 += integrate_omega(profile_, mode_, t, (0.5 + off) * h);
    }
    const Mat2 a1 = generator(t1, th1);
    const Mat2 a2 = generator(t2, th2);
    const Mat2 mag = (a1 + a2) * cplx(0.5 * h) + commutator(a2, a1) * cplx(std::sqrt(3.0) / 12.0 * h * h);
    const Mat2 e = expm_traceless(mag);
    const cplx w0 = e.a * w[0] + e.b * w[1];
    const cplx w1 = e.c * w[0] + e.d * w[1];
    w = {w0, w1};
    if (opts_.frame == Frame::RwaEnvelope) {
      theta += omega_static_ * h;
    } else {
      theta += integrate_omega(profile_, mode_, t, h);
    }
  }

  // Lab-frame (u, v) from integration-frame state.
  Coefficients to_lab(const std::array<cplx, 2>& w, double theta) const {
    if (opts_.frame == Frame::Lab) return {w[0], std::conj(w[1])};
    const cplx ph = std::polar(1.0, -theta);
    return {w[0] * ph, std::conj(w[1]) * ph};
  }

  std::array<cplx, 2> from_lab(const Coefficients& c) const { return {c.u, std::conj(c.v)}; }

 private:
  void step_rk4(std::array<cplx, 2>& w, double t, double h) const {
    auto f = [&](double tt, const std::array<cplx, 2>& y) {
      const auto s = profile_.sample(tt);
      const double omega = mode_.k_norm / std::sqrt(s.value);
      const auto r = rhs(y[0], std::conj(y[1]), omega, -s.deriv / (2.0 * s.value), sign_);
      return std::array<cplx, 2>{r.du, std::conj(r.dv)};
    };
    auto axpy = [](const std::array<cplx, 2>& y, const std::array<cplx, 2>& k, double a) {
      return std::array<cplx, 2>{y[0] + a * k[0], y[1] + a * k[1]};
    };
    const auto k1 = f(t, w);
    const auto k2 = f(t + 0.5 * h, axpy(w, k1, 0.5 * h));
    const auto k3 = f(t + 0.5 * h, axpy(w, k2, 0.5 * h));
    const auto k4 = f(t + h, axpy(w, k3, h));
    for (int i = 0; i < 2; ++i) w[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  const PermittivityProfile& profile_;
  const CavityMode& mode_;
  int sign_;
  const EvolveOptions& opts_;
  double omega_static_ = 0.0;
  double kappa_ = 0.0;
};

inline std::size_t step_count(const EvolveOptions& opts) {
  if (!(opts.dt > 0.0)) throw ConfigError("run.dt", "step must be positive");
  if (!(opts.t_max >= 0.0)) throw ConfigError("run.t_max", "t_max must be non-negative");
  return static_cast<std::size_t>(std::llround(std::ceil(opts.t_max / opts.dt - 1e-9)));
}

}  // namespace detail

/// Integrates one (mode, lambda) trajectory on the uniform grid t_n = n*h,
/// h = t_max / ceil(t_max/dt). Throws RuntimeFailure on symplectic drift.
inline Trajectory integrate_trajectory(const PermittivityProfile& profile, const CavityMode& mode,
                                       int lambda, const EvolveOptions& opts,
                                       Coefficients initial = {}) {
  if (opts.stepper == Stepper::Rk4 && opts.frame != Frame::Lab) {
    throw ConfigError("stepper", "RK4 is only available in the lab frame");
  }
  const std::size_t n_steps = detail::step_count(opts);
  const double h = n_steps == 0 ? 0.0 : opts.t_max / static_cast<double>(n_steps);
  const double omega_max = mode.k_norm / std::sqrt(profile.min_value());
  const double phase_limit = opts.frame == Frame::Rotating ? std::max(opts.max_step_phase, 1.0)
                                                           : opts.max_step_phase;
  if (opts.frame != Frame::RwaEnvelope && h * omega_max > phase_limit * (1.0 + 1e-12)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "step too coarse for mode %s: dt*omega_max = %.6g > %.6g", to_string(mode.n).c_str(),
                  h * omega_max, phase_limit);
    throw ConfigError("run.dt", buf);
  }

  const int sign = coupling_sign(lambda);
  Trajectory tr;
  tr.mode = mode;
  tr.lambda = lambda;
  tr.sign = sign;
  const std::size_t stride = std::max<std::size_t>(1, opts.output_stride);
  tr.u.reserve(n_steps / stride + 2);
  tr.v.reserve(n_steps / stride + 2);

  detail::TrajectoryIntegrator integ(profile, mode, sign, opts);
  auto w = integ.from_lab(initial);
  double theta = 0.0;
  const double norm0 = std::norm(initial.u) - std::norm(initial.v);

  auto record = [&] {
    const auto c = integ.to_lab(w, theta);
    tr.u.push_back(c.u);
    tr.v.push_back(c.v);
  };
  record();
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n) * h;
    integ.step(w, t, h, theta);
    const double drift = std::abs(std::norm(w[0]) - std::norm(w[1]) - norm0);
    tr.max_drift = std::max(tr.max_drift, drift);
    if (!(drift <= opts.drift_tolerance)) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "symplectic drift %.3e exceeds tolerance %.3e at t=%.9g (mode %s, lambda %d)", drift,
                    opts.drift_tolerance, t + h, to_string(mode.n).c_str(), lambda);
      throw RuntimeFailure(buf);
    }
    if ((n + 1) % stride == 0 || n + 1 == n_steps) record();
  }
  return tr;
}

/// Output time grid matching integrate_trajectory's recorded samples.
inline std::vector<double> output_times(const EvolveOptions& opts) {
  const std::size_t n_steps = detail::step_count(opts);
  const double h = n_steps == 0 ? 0.0 : opts.t_max / static_cast<double>(n_steps);
  const std::size_t stride = std::max<std::size_t>(1, opts.output_stride);
  std::vector<double> t{0.0};
  for (std::size_t n = 0; n < n_steps; ++n) {
    if ((n + 1) % stride == 0 || n + 1 == n_steps) t.push_back(static_cast<double>(n + 1) * h);
  }
  return t;
}

/// Evolves every (mode, lambda) pair from the vacuum coefficients u=1, v=0.
/// Trajectories are independent; with jobs > 1 they are spread over worker
/// threads and the result is identical to serial execution.
inline EvolutionResult evolve(const PermittivityProfile& profile, std::span<const CavityMode> modes,
                              std::span<const int> lambdas, const EvolveOptions& opts) {
  struct Task {
    std::size_t mode;
    int lambda;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < modes.size(); ++m)
    for (int l : lambdas) tasks.push_back({m, l});

  EvolutionResult res;
  res.t = output_times(opts);
  res.steps = detail::step_count(opts);
  res.entries.resize(tasks.size());

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      res.entries[i] = integrate_trajectory(profile, modes[tasks[i].mode], tasks[i].lambda, opts);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, std::max<std::size_t>(1, tasks.size()));
  if (jobs == 1) {
    run_range(0, tasks.size());
  } else {
    std::vector<std::future<void>> futures;
    const std::size_t chunk = (tasks.size() + jobs - 1) / jobs;
    for (std::size_t b = 0; b < tasks.size(); b += chunk) {
      futures.push_back(std::async(std::launch::async, run_range, b, std::min(tasks.size(), b + chunk)));
    }
    for (auto& f : futures) f.get();
  }
  for (const auto& e : res.entries) res.max_drift = std::max(res.max_drift, e.max_drift);
  return res;
}

/// Metric-weighted vacuum photon number (-g_ll) <a^dag(t) a(t)>_0. For the
/// timelike polarization the indefinite commutator makes the raw expectation
/// -|v|^2 and the weight -1 restores |v|^2, so every lambda counts |v|^2.
inline double vacuum_number(const Coefficients& c, int lambda) {
  const double commutator = lambda == 0 ? -1.0 : 1.0;  // [a, a^dag] = -g^{ll}
  const double raw = std::norm(c.v) * commutator;
  const double weight = -kMetric[lambda];
  return weight * raw;
}

}  // namespace tdem
