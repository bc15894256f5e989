#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qcsim/error.hpp"
#include "qcsim/grid.hpp"
#include "qcsim/kinetic.hpp"

namespace qcsim {

enum class Role { State, Observable };

inline const char* to_string(Role r) { return r == Role::State ? "state" : "observable"; }

/// Classical phase-space point (q, p).
struct ClassicalPhasePoint {
  double q = 0.0;
  double p = 0.0;
  friend bool operator==(const ClassicalPhasePoint&, const ClassicalPhasePoint&) = default;
};

/// Shared vector-space plumbing for fields stored as one flat complex vector.
template <class Derived>
class FlatField {
 public:
  Vector& data() { return data_; }
  const Vector& data() const { return data_; }

  Derived& operator+=(const Derived& o) {
    check(o);
    data_ += o.data_;
    return self();
  }
  Derived& operator-=(const Derived& o) {
    check(o);
    data_ -= o.data_;
    return self();
  }
  Derived& operator*=(cplx s) {
    data_ *= s;
    return self();
  }
  friend Derived operator+(Derived a, const Derived& b) { return a += b; }
  friend Derived operator-(Derived a, const Derived& b) { return a -= b; }
  friend Derived operator*(cplx s, Derived a) { return a *= s; }
  friend Derived operator*(double s, Derived a) { return a *= cplx(s, 0.0); }

  double max_abs() const { return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff(); }

  /// Same shape, all zeros.
  Derived zeros_like() const {
    Derived d = self();
    d.data_.setZero();
    return d;
  }

 protected:
  Vector data_;

 private:
  Derived& self() { return static_cast<Derived&>(*this); }
  const Derived& self() const { return static_cast<const Derived&>(*this); }
  void check(const Derived& o) const {
    if (!self().same_shape(o)) throw GridError("arithmetic on fields living on different grids");
  }
};

/// Operator-valued field over classical phase space: an n×n complex matrix per
/// phase-space node. State role holds kernel values D(ξ_i, ξ_j); Observable role
/// holds operator matrices (kernel · dξ), so Tr(A·D)·dξ is the pairing.
class HybridDensityField : public FlatField<HybridDensityField> {
 public:
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;

  HybridDensityField() = default;
  HybridDensityField(PhaseSpaceGrid classical, SpatialGrid quantum, Role role)
      : classical_(classical), quantum_(quantum), role_(role) {
    data_ = Vector::Zero(static_cast<Eigen::Index>(classical_.size() * block_size()));
  }

  const PhaseSpaceGrid& classical() const { return classical_; }
  const SpatialGrid& quantum() const { return quantum_; }
  Role role() const { return role_; }
  void set_role(Role r) { role_ = r; }
  std::size_t n() const { return quantum_.size(); }
  std::size_t points() const { return classical_.size(); }
  std::size_t block_size() const { return n() * n(); }

  MatrixMap at(std::size_t point) {
    return {data_.data() + point * block_size(), static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(n())};
  }
  ConstMatrixMap at(std::size_t point) const {
    return {data_.data() + point * block_size(), static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(n())};
  }
  MatrixMap at(std::size_t iq, std::size_t ip) { return at(classical_.index(iq, ip)); }
  ConstMatrixMap at(std::size_t iq, std::size_t ip) const { return at(classical_.index(iq, ip)); }

  bool same_shape(const HybridDensityField& o) const {
    return classical_ == o.classical_ && quantum_ == o.quantum_;
  }

  /// max over nodes of ‖M − M†‖_max.
  double hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t x = 0; x < points(); ++x) d = std::max(d, (at(x) - at(x).adjoint()).cwiseAbs().maxCoeff());
    return d;
  }

  /// Replace every block by its Hermitian part; returns the max correction.
  double symmetrize() {
    double d = 0.0;
    for (std::size_t x = 0; x < points(); ++x) {
      Matrix h = 0.5 * (at(x) + at(x).adjoint());
      d = std::max(d, (h - at(x)).cwiseAbs().maxCoeff());
      at(x) = h;
    }
    return d;
  }

  /// Σ_X w·Tr D(X)·dξ (quadrature weights from the grids).
  double normalization() const {
    cplx s = 0.0;
    for (std::size_t iq = 0; iq < classical_.q().size(); ++iq)
      for (std::size_t ip = 0; ip < classical_.p().size(); ++ip) {
        const auto m = at(iq, ip);
        cplx tr = 0.0;
        for (std::size_t i = 0; i < n(); ++i) tr += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) * quantum_.weight(i);
        s += classical_.weight(iq, ip) * tr;
      }
    return s.real();
  }

  /// Verify the State-role invariants; throws NumericalError.
  void check_state(double herm_tol = 1e-10, double norm_tol = 1e-8) const {
    if (role_ != Role::State) throw RoleError("field is not in State role");
    const double scale = std::max(max_abs(), 1e-300);
    if (hermiticity_defect() > herm_tol * scale) throw NumericalError("state blocks are not Hermitian");
    if (std::abs(normalization() - 1.0) > norm_tol)
      throw NumericalError("state normalization " + std::to_string(normalization()) + " differs from 1");
  }

 private:
  PhaseSpaceGrid classical_;
  SpatialGrid quantum_;
  Role role_ = Role::State;
};

/// Geometry of the discrete Weyl symbol of a kernel on an n-point quantum grid.
/// Symbols live on the half-step lattice q₂(c) = x_min + c·dx/2, c = i + j ∈ [0, 2n−2],
/// and on n momenta p₂(k) = (k − ⌊n/2⌋)·πħ/(n·dx). Line c pairs the kernel entries
/// with i − j = d ≡ c (mod 2), η = d·dx, |d| ≤ n − 1.
class WignerLattice {
 public:
  WignerLattice() = default;
  WignerLattice(SpatialGrid quantum, double hbar) : quantum_(quantum), hbar_(hbar) {
    if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
  }

  const SpatialGrid& quantum() const { return quantum_; }
  double hbar() const { return hbar_; }
  std::size_t n() const { return quantum_.size(); }
  std::size_t lines() const { return 2 * n() - 1; }
  std::size_t momenta() const { return n(); }
  std::size_t size() const { return lines() * momenta(); }
  double dq() const { return 0.5 * quantum_.spacing(); }
  double dp() const { return std::numbers::pi * hbar_ / (static_cast<double>(n()) * quantum_.spacing()); }
  /// Quadrature weight of one (q₂, p₂) cell.
  double weight() const { return dq() * dp(); }
  double q(std::size_t c) const { return quantum_.min() + static_cast<double>(c) * dq(); }
  long k_offset() const { return static_cast<long>(n() / 2); }
  double p(std::size_t k) const { return static_cast<double>(static_cast<long>(k) - k_offset()) * dp(); }
  /// Smallest slot offset m̃ of a line; slot m̃ holds d = (c mod 2) + 2m̃.
  long m_min() const { return -static_cast<long>(n() / 2); }

  /// Separation d stored in DFT slot `slot` of line c.
  long separation(std::size_t c, std::size_t slot) const {
    long m = static_cast<long>(slot);
    if (m >= static_cast<long>(n()) + m_min()) m -= static_cast<long>(n());
    return static_cast<long>(c % 2) + 2 * m;
  }
  /// Kernel indices (i, j) for line c and separation d; false if outside the grid.
  bool indices(std::size_t c, long d, std::size_t& i, std::size_t& j) const {
    const long ci = static_cast<long>(c);
    if (((ci + d) & 1L) != 0) return false;
    const long ii = (ci + d) / 2;
    const long jj = (ci - d) / 2;
    const auto nn = static_cast<long>(n());
    if (ii < 0 || jj < 0 || ii >= nn || jj >= nn) return false;
    i = static_cast<std::size_t>(ii);
    j = static_cast<std::size_t>(jj);
    return true;
  }

  friend bool operator==(const WignerLattice& a, const WignerLattice& b) {
    return a.quantum_ == b.quantum_ && a.hbar_ == b.hbar_;
  }

 private:
  SpatialGrid quantum_;
  double hbar_ = 1.0;
};

/// Scalar field on (q₁, p₁, q₂, p₂): classical phase space × Wigner lattice.
/// Index ((x·lines + c)·momenta + k), x the classical node.
class WignerField : public FlatField<WignerField> {
 public:
  WignerField() = default;
  WignerField(PhaseSpaceGrid classical, WignerLattice lattice, Role role)
      : classical_(classical), lattice_(lattice), role_(role) {
    data_ = Vector::Zero(static_cast<Eigen::Index>(classical_.size() * lattice_.size()));
  }

  const PhaseSpaceGrid& classical() const { return classical_; }
  const WignerLattice& lattice() const { return lattice_; }
  double hbar() const { return lattice_.hbar(); }
  Role role() const { return role_; }
  void set_role(Role r) { role_ = r; }

  std::size_t index(std::size_t x, std::size_t c, std::size_t k) const {
    return (x * lattice_.lines() + c) * lattice_.momenta() + k;
  }
  cplx& operator()(std::size_t x, std::size_t c, std::size_t k) { return data_(static_cast<Eigen::Index>(index(x, c, k))); }
  cplx operator()(std::size_t x, std::size_t c, std::size_t k) const { return data_(static_cast<Eigen::Index>(index(x, c, k))); }

  bool same_shape(const WignerField& o) const { return classical_ == o.classical_ && lattice_ == o.lattice_; }

  double imaginary_residue() const { return data_.size() ? data_.imag().cwiseAbs().maxCoeff() : 0.0; }
  /// Drop imaginary parts; returns the largest one removed.
  double make_real() {
    const double r = imaginary_residue();
    data_ = data_.real().cast<cplx>();
    return r;
  }

  /// Sample a symbol a(q₁, p₁, q₂, p₂) on every node.
  template <class F>
  static WignerField from_symbol(const PhaseSpaceGrid& g, const WignerLattice& l, Role role, F&& a) {
    WignerField w(g, l, role);
    for (std::size_t iq = 0; iq < g.q().size(); ++iq)
      for (std::size_t ip = 0; ip < g.p().size(); ++ip)
        for (std::size_t c = 0; c < l.lines(); ++c)
          for (std::size_t k = 0; k < l.momenta(); ++k)
            w(g.index(iq, ip), c, k) = a(g.q().point(iq), g.p().point(ip), l.q(c), l.p(k));
    return w;
  }

 private:
  PhaseSpaceGrid classical_;
  WignerLattice lattice_;
  Role role_ = Role::State;
};

/// Complex amplitudes on the quantum grid; ‖Ψ‖²·dξ = 1.
class WaveFunction {
 public:
  WaveFunction() = default;
  WaveFunction(SpatialGrid grid, Vector amplitudes, bool normalize_now = false)
      : grid_(grid), psi_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(psi_.size()) != grid_.size()) throw GridError("amplitude count does not match grid");
    if (normalize_now) normalize();
    else if (std::abs(norm() - 1.0) > 1e-10) throw NumericalError("wave function is not normalized");
  }

  /// Gaussian packet exp(−(ξ−ξ₀)²/(4σ²) + i p₀ ξ/ħ), normalized on the grid.
  static WaveFunction gaussian(const SpatialGrid& g, double center, double width, double momentum, double hbar = 1.0) {
    Vector v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.point(i) - center;
      v(static_cast<Eigen::Index>(i)) = std::exp(cplx(-x * x / (4.0 * width * width), momentum * g.point(i) / hbar));
    }
    return {g, v, true};
  }

  const SpatialGrid& grid() const { return grid_; }
  const Vector& amplitudes() const { return psi_; }
  Vector& amplitudes() { return psi_; }

  double norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) s += std::norm(psi_(static_cast<Eigen::Index>(i))) * grid_.weight(i);
    return std::sqrt(s);
  }
  void normalize() {
    const double nn = norm();
    if (!(nn > 0.0)) throw NumericalError("cannot normalize a zero wave function");
    psi_ /= nn;
  }

  /// Kernel Ψ(ξ_i)Ψ*(ξ_j).
  Matrix projector_kernel() const { return psi_ * psi_.adjoint(); }

  friend bool operator==(const WaveFunction& a, const WaveFunction& b) {
    return a.grid_ == b.grid_ && a.psi_ == b.psi_;
  }

 private:
  SpatialGrid grid_;
  Vector psi_;
};

/// Nonnegative density on classical phase space with Σ w·D = 1.
class ClassicalDistribution {
 public:
  ClassicalDistribution() = default;
  explicit ClassicalDistribution(PhaseSpaceGrid g)
      : grid_(g), data_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()))) {}
  ClassicalDistribution(PhaseSpaceGrid g, Eigen::VectorXd data) : grid_(g), data_(std::move(data)) {
    if (static_cast<std::size_t>(data_.size()) != grid_.size()) throw GridError("distribution size mismatch");
  }

  const PhaseSpaceGrid& grid() const { return grid_; }
  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }
  double& operator()(std::size_t iq, std::size_t ip) { return data_(static_cast<Eigen::Index>(grid_.index(iq, ip))); }
  double operator()(std::size_t iq, std::size_t ip) const { return data_(static_cast<Eigen::Index>(grid_.index(iq, ip))); }

  double normalization() const {
    double s = 0.0;
    for (std::size_t iq = 0; iq < grid_.q().size(); ++iq)
      for (std::size_t ip = 0; ip < grid_.p().size(); ++ip) s += grid_.weight(iq, ip) * (*this)(iq, ip);
    return s;
  }
  /// Weighted mean of f(q, p).
  template <class F>
  double mean(F&& f) const {
    double s = 0.0;
    for (std::size_t iq = 0; iq < grid_.q().size(); ++iq)
      for (std::size_t ip = 0; ip < grid_.p().size(); ++ip)
        s += grid_.weight(iq, ip) * (*this)(iq, ip) * f(grid_.q().point(iq), grid_.p().point(ip));
    return s;
  }

  friend bool operator==(const ClassicalDistribution& a, const ClassicalDistribution& b) {
    return a.grid_ == b.grid_ && a.data_ == b.data_;
  }

 private:
  PhaseSpaceGrid grid_;
  Eigen::VectorXd data_;
};

}  // namespace qcsim
