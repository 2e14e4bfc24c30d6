#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tdem/cavity.hpp"
#include "tdem/permittivity.hpp"

namespace {

using tdem::build_mode;
constexpr double kPi = std::numbers::pi;

TEST(Cavity, WaveVectorOnLattice) {
  const auto m = build_mode({1, -2, 3}, 0.5);
  EXPECT_EQ(m.k[0], 2 * kPi / 0.5 * 1);
  EXPECT_EQ(m.k[1], 2 * kPi / 0.5 * -2);
  EXPECT_EQ(m.k[2], 2 * kPi / 0.5 * 3);
}

TEST(Cavity, FundamentalAlongX) {
  const auto m = build_mode({1, 0, 0}, 2 * kPi);
  EXPECT_DOUBLE_EQ(m.k_norm, 1.0);
  EXPECT_FALSE(m.is_axis_degenerate);
  EXPECT_EQ(m.tetrad[0], (tdem::FourVector{1, 0, 0, 0}));
  // e1 lies along y (sign fixed by the k2/kp, -k1/kp convention).
  EXPECT_EQ(std::abs(m.tetrad[1][2]), 1.0);
  EXPECT_EQ(m.tetrad[1][1], 0.0);
  EXPECT_EQ(m.tetrad[1][3], 0.0);
  EXPECT_EQ(m.tetrad[3], (tdem::FourVector{0, 1, 0, 0}));
  EXPECT_LE(tdem::tetrad_residuals(m, 1.0).max(), 1e-12);
}

TEST(Cavity, AxisDegenerateMode) {
  for (int nz : {1, -1, 3}) {
    const auto m = build_mode({0, 0, nz}, 2 * kPi);
    EXPECT_TRUE(m.is_axis_degenerate);
    const auto r = tdem::tetrad_residuals(m, 2.0);
    EXPECT_LE(r.orthonormality, 1e-12);
    EXPECT_LE(r.completeness, 1e-12);
    EXPECT_LE(r.max(), 1e-12);
    EXPECT_EQ(m.tetrad[3][3], nz > 0 ? 1.0 : -1.0);
  }
}

TEST(Cavity, GenericModeMetric) {
  const auto m = build_mode({1, 2, 3}, 2 * kPi);
  for (int l = 0; l < 4; ++l) {
    for (int lp = 0; lp < 4; ++lp) {
      const double expected = l == lp ? tdem::kMetric[l] : 0.0;
      EXPECT_NEAR(tdem::minkowski_dot(m.tetrad[l], m.tetrad[lp]), expected, 1e-12);
    }
  }
  // Transverse vectors are spatial and orthogonal to k.
  for (int l : {1, 2}) {
    EXPECT_EQ(m.tetrad[l][0], 0.0);
    const double dot = m.tetrad[l][1] * m.k[0] + m.tetrad[l][2] * m.k[1] + m.tetrad[l][3] * m.k[2];
    EXPECT_NEAR(dot, 0.0, 1e-12);
  }
}

TEST(Cavity, EigenfrequencyExamples) {
  const auto m = build_mode({1, 0, 0}, 2 * kPi);
  EXPECT_DOUBLE_EQ(tdem::eigenfrequency(m, 4.0), 0.5);
  EXPECT_DOUBLE_EQ(tdem::eigenfrequency(m, 1.0), 1.0);
  const auto p = tdem::PermittivityProfile::sinusoidal(4.0, 0.1, 1.0);
  EXPECT_NEAR(tdem::eigenfrequency(m, p.eval(kPi / 4)), 0.48795003647426658, 1e-15);
  EXPECT_THROW(tdem::eigenfrequency(m, 0.0), tdem::ProfileError);
}

TEST(Cavity, FrequencyLogDerivativeConsistentWithProfile) {
  const auto m = build_mode({1, 1, 0}, 2 * kPi);
  const auto p = tdem::PermittivityProfile::sinusoidal(2.0, 0.05, 0.9);
  for (double t : {0.3, 2.0, 5.5}) {
    const double h = 1e-5;
    const double w = tdem::eigenfrequency(m, p.eval(t));
    const double fd = (tdem::eigenfrequency(m, p.eval(t + h)) - tdem::eigenfrequency(m, p.eval(t - h))) / (2 * h);
    EXPECT_NEAR(fd / w, tdem::log_derivative_ratios(p, t).omega_dot_over_omega, 1e-9);
  }
}

TEST(Cavity, NullVector) {
  const auto m = build_mode({2, -1, 1}, 3.0);
  const auto ell = tdem::null_vector(m, 2.7);
  EXPECT_NEAR(tdem::minkowski_dot(ell, ell) / (m.k_norm * m.k_norm), 0.0, 1e-12);
}

TEST(Cavity, ModeNormalization) {
  const auto a = build_mode({1, 0, 0}, 2.0);
  const auto b = build_mode({0, 1, 0}, 2.0);
  EXPECT_NEAR(tdem::mode_norm_check(a, a, 3.0, 2.0), 0.0, 1e-15);
  EXPECT_LE(tdem::mode_norm_check(a, b, 3.0, 2.0), 1e-15);
}

TEST(Cavity, ZeroModeRejected) {
  EXPECT_THROW(build_mode({0, 0, 0}, 1.0), tdem::ConfigError);
  EXPECT_THROW(build_mode({1, 0, 0}, 0.0), tdem::ConfigError);
}

TEST(Cavity, LatticeExcludesZero) {
  const auto lat = tdem::mode_lattice(1);
  EXPECT_EQ(lat.size(), 26u);
  for (const auto& n : lat) EXPECT_FALSE(n[0] == 0 && n[1] == 0 && n[2] == 0);
  EXPECT_EQ(tdem::to_string(lat.front()), "(-1,-1,-1)");
}

// Property: the full tetrad algebra holds across random lattice modes and permittivities.
TEST(Cavity, TetradAlgebraRandomModes) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> idx(-8, 8);
  std::uniform_real_distribution<double> eps(1.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    tdem::ModeIndex n{idx(rng), idx(rng), idx(rng)};
    if (i % 10 == 0) n = {0, 0, idx(rng)};
    if (n == tdem::ModeIndex{0, 0, 0}) n[2] = 1;
    const auto m = build_mode(n, 1.0 + i * 0.01);
    EXPECT_LE(tdem::tetrad_residuals(m, eps(rng)).max(), 1e-12) << tdem::to_string(n);
  }
}

TEST(Cavity, RandomPairsOrthonormal) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> idx(-4, 4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    tdem::ModeIndex na{idx(rng), idx(rng), 1 + std::abs(idx(rng))};
    tdem::ModeIndex nb{idx(rng), idx(rng), 1 + std::abs(idx(rng))};
    worst = std::max(worst, tdem::mode_norm_check(build_mode(na, 1.7), build_mode(nb, 1.7), 2.2, 1.7));
  }
  EXPECT_LE(worst, 1e-12);
}

}  // namespace
