#pragma once

// Cubic cavity with periodic boundaries: mode lattice, instantaneous
// eigenfrequencies, the null 4-vector and the four-polarization tetrad.
//
// Four-vectors are stored with lower indices; contractions go through the
// fixed metric diag(1,-1,-1,-1).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "tdem/error.hpp"

namespace tdem {

using FourVector = std::array<double, 4>;
using ModeIndex = std::array<int, 3>;

inline constexpr std::array<double, 4> kMetric{1.0, -1.0, -1.0, -1.0};

inline double minkowski_dot(const FourVector& a, const FourVector& b) {
  double s = 0.0;
  for (int mu = 0; mu < 4; ++mu) s += kMetric[mu] * a[mu] * b[mu];
  return s;
}

inline std::string to_string(const ModeIndex& n) {
  return "(" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]) + ")";
}

struct CavityMode {
  ModeIndex n{};
  std::array<double, 3> k{};
  double k_norm = 0.0;
  double k_parallel = 0.0;
  std::array<FourVector, 4> tetrad{};  // e^(lambda), lambda = 0..3
  bool is_axis_degenerate = false;
};

/// Builds the mode with k = 2*pi*n/L. Modes along the z axis (k_parallel = 0)
/// use e1 = x, e2 = y, e3 = sign(k3) z.
inline CavityMode build_mode(const ModeIndex& n, double L) {
  if (n[0] == 0 && n[1] == 0 && n[2] == 0) {
    throw ConfigError("mode", "zero mode (0,0,0) carries no propagating field");
  }
  if (!(L > 0.0)) throw ConfigError("cavity.L", "cavity side must be positive");
  CavityMode m;
  m.n = n;
  const double scale = 2.0 * std::numbers::pi / L;
  for (int i = 0; i < 3; ++i) m.k[i] = scale * n[i];
  const auto [k1, k2, k3] = m.k;
  m.k_parallel = std::hypot(k1, k2);
  m.k_norm = std::hypot(m.k_parallel, k3);
  const double k = m.k_norm;
  const double kp = m.k_parallel;

  m.tetrad[0] = {1.0, 0.0, 0.0, 0.0};
  m.tetrad[3] = {0.0, k1 / k, k2 / k, k3 / k};
  if (n[0] == 0 && n[1] == 0) {
    m.is_axis_degenerate = true;
    m.tetrad[1] = {0.0, 1.0, 0.0, 0.0};
    m.tetrad[2] = {0.0, 0.0, 1.0, 0.0};
    m.tetrad[3] = {0.0, 0.0, 0.0, k3 > 0.0 ? 1.0 : -1.0};
  } else {
    m.tetrad[1] = {0.0, k2 / kp, -k1 / kp, 0.0};
    m.tetrad[2] = {0.0, k1 * k3 / (k * kp), k2 * k3 / (k * kp), -kp * kp / (k * kp)};
  }
  return m;
}

/// omega = |k| / sqrt(eps).
inline double eigenfrequency(const CavityMode& mode, double epsilon_t) {
  if (!(epsilon_t > 0.0)) throw ProfileError("eigenfrequency needs positive permittivity");
  return mode.k_norm / std::sqrt(epsilon_t);
}

/// ell = (sqrt(eps)*omega, k1, k2, k3).
inline FourVector null_vector(const CavityMode& mode, double epsilon_t) {
  const double omega = eigenfrequency(mode, epsilon_t);
  return {std::sqrt(epsilon_t) * omega, mode.k[0], mode.k[1], mode.k[2]};
}

/// |integral over the box of eps * phi_k * conj(phi_k') - delta_kk'| for the
/// plane-wave modes phi_k = L^{-3/2} eps^{-1/2} exp(i k.x). Each axis integral
/// is evaluated in closed form, so distinct lattice modes give roundoff only.
inline double mode_norm_check(const CavityMode& a, const CavityMode& b, double epsilon_t, double L) {
  if (!(epsilon_t > 0.0)) throw ProfileError("mode_norm_check needs positive permittivity");
  const double amplitude_sq = 1.0 / (L * L * L * epsilon_t);
  std::complex<double> integral{epsilon_t * amplitude_sq, 0.0};
  bool same = true;
  for (int i = 0; i < 3; ++i) {
    const int dn = a.n[i] - b.n[i];
    if (dn == 0) {
      integral *= L;
    } else {
      same = false;
      const double arg = 2.0 * std::numbers::pi * dn;
      const std::complex<double> num = std::exp(std::complex<double>(0.0, arg)) - 1.0;
      integral *= num / std::complex<double>(0.0, arg / L);
    }
  }
  return std::abs(integral - (same ? 1.0 : 0.0));
}

struct TetradResiduals {
  double orthonormality = 0.0;  // max |e(l).e(l') - g^{ll'}|
  double completeness = 0.0;    // max |sum g^{ll'} e(l)_mu e(l')_nu - g_{mu nu}|
  double null_norm = 0.0;       // |ell.ell|
  double transversality = 0.0;  // max |ell.e(1)|, |ell.e(2)|
  double timelike_longitudinal = 0.0;  // |ell.e(0) + ell.e(3)|

  double max() const {
    return std::max({orthonormality, completeness, null_norm, transversality, timelike_longitudinal});
  }
};

inline TetradResiduals tetrad_residuals(const CavityMode& mode, double epsilon_t) {
  TetradResiduals r;
  const auto& e = mode.tetrad;
  for (int l = 0; l < 4; ++l) {
    for (int lp = 0; lp < 4; ++lp) {
      const double target = (l == lp) ? kMetric[l] : 0.0;
      r.orthonormality = std::max(r.orthonormality, std::abs(minkowski_dot(e[l], e[lp]) - target));
    }
  }
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      double s = 0.0;
      for (int l = 0; l < 4; ++l) s += kMetric[l] * e[l][mu] * e[l][nu];
      const double target = (mu == nu) ? kMetric[mu] : 0.0;
      r.completeness = std::max(r.completeness, std::abs(s - target));
    }
  }
  const FourVector ell = null_vector(mode, epsilon_t);
  // Relative to |k|^2 so the residuals stay scale-free across the lattice.
  const double k2 = mode.k_norm * mode.k_norm;
  r.null_norm = std::abs(minkowski_dot(ell, ell)) / k2;
  r.transversality = std::max(std::abs(minkowski_dot(ell, e[1])), std::abs(minkowski_dot(ell, e[2]))) / mode.k_norm;
  r.timelike_longitudinal = std::abs(minkowski_dot(ell, e[0]) + minkowski_dot(ell, e[3])) / mode.k_norm;
  return r;
}

/// All lattice triples with |n_i| <= nmax except the zero mode, in lexicographic order.
inline std::vector<ModeIndex> mode_lattice(int nmax) {
  std::vector<ModeIndex> out;
  for (int x = -nmax; x <= nmax; ++x)
    for (int y = -nmax; y <= nmax; ++y)
      for (int z = -nmax; z <= nmax; ++z)
        if (x != 0 || y != 0 || z != 0) out.push_back({x, y, z});
  return out;
}

}  // namespace tdem
