#pragma once

// Time-dependent permittivity eps(t) with analytic first and second
// derivatives. Three kinds: constant, the sinusoidal drive
// eps + 2*delta*sin(2*Omega*t), and tabulated samples interpolated by a
// natural cubic spline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tdem/error.hpp"

namespace tdem {

/// Natural cubic spline on a strictly increasing grid.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) {
      throw ProfileError("cubic spline needs at least 3 samples with matching sizes");
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) {
        throw ProfileError("tabulated grid must be strictly increasing (row " + std::to_string(i) + ")");
      }
    }
    // Second derivatives m_i; natural ends m_0 = m_{n-1} = 0. Thomas algorithm.
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double a = h0 / 6.0;
      const double b = (h0 + h1) / 3.0;
      const double cc = h1 / 6.0;
      const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
      const double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
    }
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

  struct Eval {
    double value;
    double deriv;
    double deriv2;
  };

  Eval eval(double t) const {
    if (t < x_.front() || t > x_.back()) {
      throw ProfileError("t=" + std::to_string(t) + " outside tabulated support [" +
                         std::to_string(x_.front()) + ", " + std::to_string(x_.back()) +
                         "]; extrapolation is not supported");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    const double value = A * y_[i] + B * y_[i + 1] +
                         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    const double deriv = (y_[i + 1] - y_[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i] +
                         (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
    const double deriv2 = A * m_[i] + B * m_[i + 1];
    return {value, deriv, deriv2};
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

struct ProfileSample {
  double value;
  double deriv;
  double deriv2;
};

struct LogDerivativeRatios {
  double kappa_dot_over_kappa;  // d/dt ln sqrt(eps)
  double omega_dot_over_omega;  // d/dt ln(|k|/sqrt(eps)), always the negative of the above
};

class PermittivityProfile {
 public:
  enum class Kind { Constant, Sinusoidal, Tabulated };

  static PermittivityProfile constant(double epsilon) {
    if (!(epsilon > 0.0)) throw ProfileError("constant permittivity must be positive");
    PermittivityProfile p;
    p.kind_ = Kind::Constant;
    p.epsilon_ = epsilon;
    return p;
  }

  /// eps(t) = epsilon + 2*delta*sin(2*omega*t). delta may be negative (time-reversed drive).
  static PermittivityProfile sinusoidal(double epsilon, double delta, double omega) {
    if (!(epsilon > 0.0)) throw ProfileError("static permittivity must be positive");
    if (!(2.0 * std::abs(delta) < epsilon)) {
      throw ProfileError("permittivity may become non-positive: require 2|delta| < epsilon");
    }
    PermittivityProfile p;
    p.kind_ = Kind::Sinusoidal;
    p.epsilon_ = epsilon;
    p.delta_ = delta;
    p.omega_ = omega;
    return p;
  }

  static PermittivityProfile tabulated(std::vector<double> t, std::vector<double> eps) {
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (!(eps[i] > 0.0)) {
        throw ProfileError("tabulated permittivity must be positive (row " + std::to_string(i) + ")");
      }
    }
    PermittivityProfile p;
    p.kind_ = Kind::Tabulated;
    p.spline_ = std::make_shared<const CubicSpline>(std::move(t), std::move(eps));
    p.epsilon_ = p.spline_->values().front();
    return p;
  }

  /// Two-column CSV `t,epsilon` with a header row.
  static PermittivityProfile load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProfileError("cannot open permittivity table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ProfileError("permittivity table '" + path + "' is empty");
    std::vector<double> ts, es;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      std::istringstream ss(line);
      std::string a, b;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
        throw ProfileError(path + ":" + std::to_string(row) + ": expected two columns");
      }
      try {
        ts.push_back(std::stod(a));
        es.push_back(std::stod(b));
      } catch (const std::exception&) {
        throw ProfileError(path + ":" + std::to_string(row) + ": non-numeric value");
      }
    }
    return tabulated(std::move(ts), std::move(es));
  }

  Kind kind() const noexcept { return kind_; }
  double epsilon_static() const noexcept { return epsilon_; }
  double delta() const noexcept { return delta_; }
  double drive_omega() const noexcept { return omega_; }
  const CubicSpline* table() const noexcept { return spline_.get(); }

  ProfileSample sample(double t) const {
    ProfileSample s{};
    switch (kind_) {
      case Kind::Constant:
        s = {epsilon_, 0.0, 0.0};
        break;
      case Kind::Sinusoidal: {
        const double phase = 2.0 * omega_ * t;
        s.value = epsilon_ + 2.0 * delta_ * std::sin(phase);
        s.deriv = 4.0 * delta_ * omega_ * std::cos(phase);
        s.deriv2 = -8.0 * delta_ * omega_ * omega_ * std::sin(phase);
        break;
      }
      case Kind::Tabulated: {
        const auto e = spline_->eval(t);
        s = {e.value, e.deriv, e.deriv2};
        break;
      }
    }
    if (!(s.value > 0.0)) {
      throw ProfileError("permittivity non-positive at t=" + std::to_string(t));
    }
    return s;
  }

  double eval(double t) const { return sample(t).value; }
  double deriv(double t) const { return sample(t).deriv; }
  double deriv2(double t) const { return sample(t).deriv2; }

  /// Lower bound of eps over the run window, used for step-size checks.
  double min_value() const {
    switch (kind_) {
      case Kind::Constant:
        return epsilon_;
      case Kind::Sinusoidal:
        return epsilon_ - 2.0 * std::abs(delta_);
      case Kind::Tabulated: {
        const auto& v = spline_->values();
        return *std::min_element(v.begin(), v.end());
      }
    }
    return epsilon_;
  }

 private:
  PermittivityProfile() = default;

  Kind kind_ = Kind::Constant;
  double epsilon_ = 1.0;
  double delta_ = 0.0;
  double omega_ = 0.0;
  std::shared_ptr<const CubicSpline> spline_;
};

inline double eval(const PermittivityProfile& profile, double t) { return profile.eval(t); }

inline LogDerivativeRatios log_derivative_ratios(const PermittivityProfile& profile, double t) {
  const auto s = profile.sample(t);
  const double k = s.deriv / (2.0 * s.value);
  return {k, -k};
}

}  // namespace tdem
