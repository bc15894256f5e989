#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "qcsim/error.hpp"
#include "qcsim/grid.hpp"

namespace qcsim {

namespace potentials {

struct Zero {};

/// Φ(r) = ½·k·r², r = q − ξ.
struct Harmonic {
  double k = 1.0;
};

/// φ(q, ξ) = c·q·ξ. Not a function of q − ξ; it is the cross term of the
/// harmonic coupling and keeps first-moment dynamics closed.
struct Bilinear {
  double c = 1.0;
};

/// Φ(r) = V0·exp(−r²/(2w²)).
struct GaussianBump {
  double v0 = 1.0;
  double w = 1.0;
};

/// Φ(r) sampled uniformly on [r_min, r_max]; natural cubic spline in between.
class Tabulated {
 public:
  Tabulated() = default;
  Tabulated(double r_min, double r_max, std::vector<double> values)
      : r_min_(r_min), r_max_(r_max), y_(std::move(values)) {
    if (y_.size() < 4) throw ConfigError("tabulated potential needs at least 4 samples");
    if (!(r_max_ > r_min_)) throw ConfigError("tabulated potential needs r_max > r_min");
    h_ = (r_max_ - r_min_) / static_cast<double>(y_.size() - 1);
    build_second_derivatives();
  }

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  const std::vector<double>& values() const { return y_; }

  double value(double r) const { return eval(r, false); }
  double derivative(double r) const { return eval(r, true); }

  friend bool operator==(const Tabulated& a, const Tabulated& b) {
    return a.r_min_ == b.r_min_ && a.r_max_ == b.r_max_ && a.y_ == b.y_;
  }

 private:
  void build_second_derivatives() {
    // Tridiagonal system for a natural spline on a uniform mesh.
    const std::size_t n = y_.size();
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
      const double denom = 4.0 - c[i - 1];
      c[i] = 1.0 / denom;
      d[i] = (rhs - d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  double eval(double r, bool deriv) const {
    const double eps = 1e-12 * (r_max_ - r_min_);
    if (r < r_min_ - eps || r > r_max_ + eps) {
      throw RangeError("tabulated potential evaluated outside [" + std::to_string(r_min_) + ", " +
                       std::to_string(r_max_) + "] at r=" + std::to_string(r));
    }
    const double s = std::clamp((r - r_min_) / h_, 0.0, static_cast<double>(y_.size() - 1));
    auto i = std::min(static_cast<std::size_t>(s), y_.size() - 2);
    const double a = static_cast<double>(i + 1) - s;  // weight of left node
    const double b = 1.0 - a;
    if (!deriv) {
      return a * y_[i] + b * y_[i + 1] +
             ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h_ * h_ / 6.0;
    }
    return (y_[i + 1] - y_[i]) / h_ - (3.0 * a * a - 1.0) / 6.0 * h_ * m_[i] +
           (3.0 * b * b - 1.0) / 6.0 * h_ * m_[i + 1];
  }

  double r_min_ = 0.0, r_max_ = 1.0, h_ = 1.0;
  std::vector<double> y_, m_;
};

}  // namespace potentials

/// Interaction potential φ(q, ξ) between the classical coordinate q and the
/// quantum coordinate ξ.
class Potential {
 public:
  using Variant = std::variant<potentials::Zero, potentials::Harmonic, potentials::Bilinear,
                               potentials::GaussianBump, potentials::Tabulated>;

  Potential() = default;
  template <class T>
  Potential(T v) : v_(std::move(v)) {  // NOLINT(google-explicit-constructor)
    validate();
  }

  const Variant& variant() const { return v_; }
  bool is_zero() const { return std::holds_alternative<potentials::Zero>(v_); }
  /// Polynomial of degree ≤ 2 in (q, ξ).
  bool is_quadratic() const { return !std::holds_alternative<potentials::GaussianBump>(v_) &&
                                     !std::holds_alternative<potentials::Tabulated>(v_); }

  std::string name() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, potentials::Zero>) return "zero";
          else if constexpr (std::is_same_v<T, potentials::Harmonic>) return "harmonic";
          else if constexpr (std::is_same_v<T, potentials::Bilinear>) return "bilinear";
          else if constexpr (std::is_same_v<T, potentials::GaussianBump>) return "gaussian_bump";
          else return "tabulated";
        },
        v_);
  }

  double operator()(double q, double xi) const {
    return std::visit(
        [&](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          const double r = q - xi;
          if constexpr (std::is_same_v<T, potentials::Zero>) return 0.0;
          else if constexpr (std::is_same_v<T, potentials::Harmonic>) return 0.5 * p.k * r * r;
          else if constexpr (std::is_same_v<T, potentials::Bilinear>) return p.c * q * xi;
          else if constexpr (std::is_same_v<T, potentials::GaussianBump>)
            return p.v0 * std::exp(-r * r / (2.0 * p.w * p.w));
          else return p.value(r);
        },
        v_);
  }

  /// ∂φ/∂q.
  double dq(double q, double xi) const {
    return std::visit(
        [&](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          const double r = q - xi;
          if constexpr (std::is_same_v<T, potentials::Zero>) return 0.0;
          else if constexpr (std::is_same_v<T, potentials::Harmonic>) return p.k * r;
          else if constexpr (std::is_same_v<T, potentials::Bilinear>) return p.c * xi;
          else if constexpr (std::is_same_v<T, potentials::GaussianBump>)
            return -p.v0 * r / (p.w * p.w) * std::exp(-r * r / (2.0 * p.w * p.w));
          else return p.derivative(r);
        },
        v_);
  }

  /// ∂φ/∂ξ.
  double dxi(double q, double xi) const {
    if (const auto* b = std::get_if<potentials::Bilinear>(&v_)) return b->c * q;
    return -dq(q, xi);
  }

  /// Throws RangeError unless every q − ξ reachable on the grids is covered.
  void check_range(const SpatialGrid& q, const SpatialGrid& xi) const {
    if (const auto* t = std::get_if<potentials::Tabulated>(&v_)) {
      const double lo = q.point(0) - xi.point(xi.size() - 1);
      const double hi = q.point(q.size() - 1) - xi.point(0);
      if (lo < t->r_min() - 1e-12 || hi > t->r_max() + 1e-12) {
        throw RangeError("tabulated potential covers [" + std::to_string(t->r_min()) + ", " +
                         std::to_string(t->r_max()) + "] but grids reach [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
      }
    }
  }

  friend bool operator==(const Potential& a, const Potential& b) {
    if (a.v_.index() != b.v_.index()) return false;
    return std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          const auto& y = std::get<T>(b.v_);
          if constexpr (std::is_same_v<T, potentials::Zero>) return true;
          else if constexpr (std::is_same_v<T, potentials::Harmonic>) return x.k == y.k;
          else if constexpr (std::is_same_v<T, potentials::Bilinear>) return x.c == y.c;
          else if constexpr (std::is_same_v<T, potentials::GaussianBump>) return x.v0 == y.v0 && x.w == y.w;
          else return x == y;
        },
        a.v_);
  }

 private:
  void validate() const {
    if (const auto* h = std::get_if<potentials::Harmonic>(&v_); h && !(h->k > 0.0))
      throw ConfigError("harmonic potential requires k > 0");
    if (const auto* g = std::get_if<potentials::GaussianBump>(&v_); g && !(g->w > 0.0))
      throw ConfigError("gaussian bump requires w > 0");
  }

  Variant v_{potentials::Zero{}};
};

}  // namespace qcsim
