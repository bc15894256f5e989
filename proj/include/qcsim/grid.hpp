#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "qcsim/error.hpp"

namespace qcsim {

enum class Boundary { Periodic, Bounded };

inline const char* to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "bounded"; }

/// Uniform 1D grid. Periodic grids exclude the right end point
/// (dx = (max-min)/n), bounded grids include it (dx = (max-min)/(n-1)).
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(double x_min, double x_max, std::size_t n, Boundary boundary = Boundary::Periodic)
      : x_min_(x_min), x_max_(x_max), n_(n), boundary_(boundary) {
    if (!(x_max > x_min)) throw GridError("grid requires x_max > x_min");
    if (n < 2) throw GridError("grid requires at least 2 points");
    dx_ = (x_max - x_min) / static_cast<double>(boundary == Boundary::Periodic ? n : n - 1);
  }

  double min() const { return x_min_; }
  double max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return dx_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::Periodic; }
  double point(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  /// Period length (periodic) or covered extent (bounded).
  double length() const { return dx_ * static_cast<double>(n_); }

  /// Quadrature weight of node i: Riemann on periodic grids, trapezoid on bounded ones.
  double weight(std::size_t i) const {
    if (!periodic() && (i == 0 || i + 1 == n_)) return 0.5 * dx_;
    return dx_;
  }

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_ == b.n_ && a.boundary_ == b.boundary_;
  }

 private:
  double x_min_ = 0.0;
  double x_max_ = 1.0;
  std::size_t n_ = 2;
  Boundary boundary_ = Boundary::Periodic;
  double dx_ = 0.5;
};

/// Classical phase space (q, p); point index = iq * np + ip.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid() = default;
  PhaseSpaceGrid(SpatialGrid q, SpatialGrid p) : q_(q), p_(p) {
    if (!(q_.spacing() * p_.spacing() > 0.0)) throw GridError("phase-space weight must be positive");
  }

  const SpatialGrid& q() const { return q_; }
  const SpatialGrid& p() const { return p_; }
  std::size_t size() const { return q_.size() * p_.size(); }
  std::size_t index(std::size_t iq, std::size_t ip) const { return iq * p_.size() + ip; }
  double weight(std::size_t iq, std::size_t ip) const { return q_.weight(iq) * p_.weight(ip); }
  double cell() const { return q_.spacing() * p_.spacing(); }

  friend bool operator==(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
    return a.q_ == b.q_ && a.p_ == b.p_;
  }

 private:
  SpatialGrid q_{-1.0, 1.0, 2};
  SpatialGrid p_{-1.0, 1.0, 2};
};

inline void require_same(const SpatialGrid& a, const SpatialGrid& b, const char* what) {
  if (!(a == b)) throw GridError(std::string("grid mismatch: ") + what);
}
inline void require_same(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b, const char* what) {
  if (!(a == b)) throw GridError(std::string("phase-space grid mismatch: ") + what);
}

/// Neighbour index for a central-difference stencil; returns size() when the
/// neighbour lies outside a bounded grid (zero extension).
inline std::size_t neighbour(const SpatialGrid& g, std::size_t i, int offset) {
  const auto n = static_cast<long>(g.size());
  long j = static_cast<long>(i) + offset;
  if (g.periodic()) return static_cast<std::size_t>(((j % n) + n) % n);
  if (j < 0 || j >= n) return g.size();
  return static_cast<std::size_t>(j);
}

}  // namespace qcsim
