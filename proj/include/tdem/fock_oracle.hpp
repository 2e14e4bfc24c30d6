#pragma once

// Brute-force check of the squeezing dynamics in a truncated number basis.
// Evolution is a product of exact exponentials of piecewise-constant
// Hermitian Hamiltonians, so every step is unitary up to roundoff. The
// timelike polarization's indefinite metric is applied as a sign on
// expectation values; the linear algebra itself stays positive definite.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tdem/bogoliubov.hpp"
#include "tdem/cavity.hpp"
#include "tdem/error.hpp"
#include "tdem/permittivity.hpp"

namespace tdem {

struct TruncatedMode {
  int cutoff = 0;
  Eigen::MatrixXd a;
  Eigen::MatrixXd adag;
  Eigen::MatrixXd number;
  int metric_sign = +1;  // [a, a^dag] = metric_sign on the untruncated block

  static TruncatedMode build(int cutoff, int metric_sign = +1) {
    if (cutoff < 2) throw ConfigError("oracle.cutoff", "Fock cutoff must be >= 2");
    TruncatedMode m;
    m.cutoff = cutoff;
    m.metric_sign = metric_sign;
    m.a = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) m.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    m.adag = m.a.transpose();
    m.number = m.adag * m.a;
    return m;
  }
};

/// H = i * strength * (a^dag a^dag - a a) on the first D number states.
inline Eigen::MatrixXcd build_squeeze_hamiltonian(double strength, int cutoff) {
  const auto m = TruncatedMode::build(cutoff);
  const Eigen::MatrixXd gen = m.adag * m.adag - m.a * m.a;
  return std::complex<double>(0.0, strength) * gen.cast<std::complex<double>>();
}

struct CommutatorCheck {
  double residual = 0.0;        // max |[a, a^dag] - 1| on the first D-1 states
  double vacuum_a_adag = 0.0;   // <0| a a^dag |0> with the metric sign applied
};

inline CommutatorCheck verify_commutator_metric(int metric_sign, int cutoff) {
  if (cutoff < 3) throw ConfigError("oracle.cutoff", "commutator check needs D >= 3");
  const auto m = TruncatedMode::build(cutoff, metric_sign);
  const Eigen::MatrixXd comm = m.a * m.adag - m.adag * m.a;
  const auto block = comm.topLeftCorner(cutoff - 1, cutoff - 1);
  const double residual = (block - Eigen::MatrixXd::Identity(cutoff - 1, cutoff - 1)).cwiseAbs().maxCoeff();
  const double aadag = (m.a * m.adag)(0, 0);
  return {residual, metric_sign * aadag};
}

/// Resonant constant squeeze Hamiltonian.
struct RwaDrive {
  double strength = 0.0;
};

/// Full interaction-picture Hamiltonian
///   H(t) = i (kappa'/4kappa) (a^dag^2 e^{2i Theta} - a^2 e^{-2i Theta}),  Theta = int omega,
/// for a mode of wavenumber k_norm.
struct FullDrive {
  PermittivityProfile profile;
  double k_norm = 1.0;
};

using HamiltonianSpec = std::variant<RwaDrive, FullDrive>;

struct VacuumState {};
struct ThermalState {
  double n_bar = 0.0;
};
struct ExplicitState {
  Eigen::VectorXcd psi;
};
using OracleInitial = std::variant<VacuumState, ThermalState, ExplicitState>;

struct OracleOptions {
  int cutoff = 40;
  double t_max = 0.0;
  std::size_t samples = 101;
  double max_norm_step = 0.05;     // ||H|| * dt bound
  double max_phase_step = 0.05;    // dt * omega bound for the full drive
  double leakage_threshold = 1e-8; // population in the top 10% of the basis
  bool throw_on_leakage = true;
};

struct OracleRun {
  std::vector<double> t;
  std::vector<double> n;        // <a^dag a>
  std::vector<double> leakage;
  std::vector<double> norm;
  std::size_t steps = 0;
  bool valid = true;
  std::optional<double> first_violation;
};

class LeakageError : public RuntimeFailure {
 public:
  LeakageError(double t, double leakage) : RuntimeFailure(describe(t, leakage)), t_(t), leakage_(leakage) {}
  double time() const noexcept { return t_; }
  double leakage() const noexcept { return leakage_; }

 private:
  static std::string describe(double t, double leakage) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "Fock truncation leakage %.3e exceeds threshold at t=%.6g", leakage, t);
    return buf;
  }
  double t_;
  double leakage_;
};

namespace detail {

// Top 10% of the basis, at least one state.
inline int leakage_start(int cutoff) { return cutoff - std::max(1, (cutoff + 9) / 10); }

}  // namespace detail

inline OracleRun evolve_oracle(const HamiltonianSpec& spec, const OracleInitial& initial, const OracleOptions& opts) {
  using Mat = Eigen::MatrixXcd;
  using Vec = Eigen::VectorXcd;
  const int D = opts.cutoff;
  if (D < 2) throw ConfigError("oracle.cutoff", "Fock cutoff must be >= 2");
  if (opts.samples < 2) throw ConfigError("samples", "need at least two samples");
  if (!(opts.t_max >= 0.0)) throw ConfigError("t_max", "must be non-negative");

  const auto mode = TruncatedMode::build(D);
  // K = i (a^dag^2 - a^2) is Hermitian; H = f(t) R K R^dag with R = diag(e^{i Theta n}).
  const Mat K = build_squeeze_hamiltonian(1.0, D);
  Eigen::SelfAdjointEigenSolver<Mat> es(K);
  const Mat W = es.eigenvectors();
  const Mat Wd = W.adjoint();
  const Eigen::VectorXd lam = es.eigenvalues();
  const double k_norm_bound = lam.cwiseAbs().maxCoeff();

  const bool mixed = std::holds_alternative<ThermalState>(initial);
  Vec psi;
  Mat rho;
  if (std::holds_alternative<VacuumState>(initial)) {
    psi = Vec::Zero(D);
    psi(0) = 1.0;
  } else if (const auto* th = std::get_if<ThermalState>(&initial)) {
    if (!(th->n_bar >= 0.0)) throw ConfigError("nbar", "thermal mean must be non-negative");
    rho = Mat::Zero(D, D);
    const double q = th->n_bar / (1.0 + th->n_bar);
    double z = 0.0;
    for (int n = 0; n < D; ++n) {
      const double w = std::pow(q, n);
      rho(n, n) = w;
      z += w;
    }
    rho /= z;
  } else {
    psi = std::get<ExplicitState>(initial).psi;
    if (psi.size() != D) throw ConfigError("initial", "explicit state dimension must equal the cutoff");
  }

  // Per-step factor data: strength f and phase Theta at the step midpoint.
  const auto* rwa = std::get_if<RwaDrive>(&spec);
  const auto* full = std::get_if<FullDrive>(&spec);
  double max_f = 0.0;
  double max_omega = 0.0;
  if (rwa) {
    max_f = std::abs(rwa->strength);
  } else {
    const auto& p = full->profile;
    max_omega = full->k_norm / std::sqrt(p.min_value());
    if (p.kind() == PermittivityProfile::Kind::Sinusoidal) {
      max_f = std::abs(4.0 * p.delta() * p.drive_omega()) / (8.0 * p.min_value());
    } else if (p.kind() == PermittivityProfile::Kind::Tabulated) {
      for (double t : p.table()->knots()) {
        const auto s = p.sample(t);
        max_f = std::max(max_f, std::abs(s.deriv) / (8.0 * s.value));
      }
    }
  }

  OracleRun run;
  const std::size_t intervals = opts.samples - 1;
  const double sample_dt = opts.t_max / static_cast<double>(intervals);
  std::size_t sub = 1;
  if (max_f * k_norm_bound * sample_dt > opts.max_norm_step) {
    sub = static_cast<std::size_t>(std::ceil(max_f * k_norm_bound * sample_dt / opts.max_norm_step));
  }
  if (full && max_omega * sample_dt / static_cast<double>(sub) > opts.max_phase_step) {
    sub = static_cast<std::size_t>(std::ceil(max_omega * sample_dt / opts.max_phase_step));
  }
  const double h = sample_dt / static_cast<double>(sub);

  const Eigen::VectorXd nvec = mode.number.diagonal();
  const int top = detail::leakage_start(D);

  auto measure = [&](double t) {
    double n = 0.0, leak = 0.0, norm = 0.0;
    if (mixed) {
      for (int i = 0; i < D; ++i) {
        const double p = rho(i, i).real();
        n += nvec(i) * p;
        norm += p;
        if (i >= top) leak += p;
      }
    } else {
      for (int i = 0; i < D; ++i) {
        const double p = std::norm(psi(i));
        n += nvec(i) * p;
        norm += p;
        if (i >= top) leak += p;
      }
    }
    run.t.push_back(t);
    run.n.push_back(n);
    run.leakage.push_back(leak);
    run.norm.push_back(norm);
    if (leak > opts.leakage_threshold && run.valid) {
      run.valid = false;
      run.first_violation = t;
      if (opts.throw_on_leakage) throw LeakageError(t, leak);
    }
  };

  // Constant drive: one propagator reused for every step.
  Mat step_rwa;
  if (rwa) {
    const Eigen::VectorXcd ph = (lam.cast<std::complex<double>>() * std::complex<double>(0.0, -rwa->strength * h))
                                    .array()
                                    .exp();
    step_rwa = W * ph.asDiagonal() * Wd;
  }

  double theta = 0.0;  // accumulated mode phase for the full drive
  CavityMode probe;
  if (full) probe.k_norm = full->k_norm;

  measure(0.0);
  for (std::size_t s = 0; s < intervals; ++s) {
    for (std::size_t j = 0; j < sub; ++j) {
      const double t0 = (static_cast<double>(s) * static_cast<double>(sub) + static_cast<double>(j)) * h;
      if (rwa) {
        if (mixed) {
          rho = step_rwa * rho * step_rwa.adjoint();
        } else {
          psi = step_rwa * psi;
        }
      } else {
        const double tm = t0 + 0.5 * h;
        const auto smp = full->profile.sample(tm);
        const double f = smp.deriv / (8.0 * smp.value);
        const double theta_mid = theta + detail::integrate_omega(full->profile, probe, t0, 0.5 * h);
        Eigen::VectorXcd r(D);
        for (int n = 0; n < D; ++n) r(n) = std::polar(1.0, theta_mid * n);
        const Eigen::VectorXcd ph =
            (lam.cast<std::complex<double>>() * std::complex<double>(0.0, -f * h)).array().exp();
        // U x = R W diag(ph) W^dag R^dag x
        auto apply = [&](const auto& x) -> Mat {
          Mat y = r.conjugate().asDiagonal() * x;
          y = Wd * y;
          y = ph.asDiagonal() * y;
          y = W * y;
          return r.asDiagonal() * y;
        };
        if (mixed) {
          const Mat left = apply(rho);
          rho = apply(left.adjoint().eval());
        } else {
          psi = apply(psi);
        }
        theta += detail::integrate_omega(full->profile, probe, t0, h);
      }
      ++run.steps;
    }
    measure(static_cast<double>(s + 1) * sample_dt);
  }
  return run;
}

/// Metric bookkeeping for a measured <a^dag a>: the indefinite-metric raw
/// expectation for lambda = 0 is the negative of the positive-space value,
/// and (-g_ll) turns it back into a positive photon count.
inline double metric_signed_number(int lambda, double measured) { return lambda == 0 ? -measured : measured; }
inline double metric_weighted_number(int lambda, double measured) {
  return -kMetric[lambda] * metric_signed_number(lambda, measured);
}

}  // namespace tdem
