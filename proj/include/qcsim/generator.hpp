#pragma once

#include <algorithm>
#include <cmath>

#include "qcsim/fft.hpp"
#include "qcsim/fields.hpp"
#include "qcsim/hamiltonian.hpp"

namespace qcsim {

enum class DerivativeScheme { Central, Spectral };

inline const char* to_string(DerivativeScheme s) { return s == DerivativeScheme::Spectral ? "spectral" : "central"; }

enum class Axis { Q, P };

namespace detail {

/// ∂ along one classical axis of a flat field laid out as [node][block].
inline Vector classical_derivative(const PhaseSpaceGrid& g, const Vector& data, std::size_t block, Axis axis,
                                   DerivativeScheme scheme) {
  const SpatialGrid& ax = axis == Axis::Q ? g.q() : g.p();
  const std::size_t nq = g.q().size(), np = g.p().size();
  const std::size_t na = ax.size();
  auto node = [&](std::size_t a, std::size_t other) {
    return axis == Axis::Q ? g.index(a, other) : g.index(other, a);
  };
  const std::size_t n_other = axis == Axis::Q ? np : nq;
  const auto b = static_cast<Eigen::Index>(block);
  Vector out = Vector::Zero(data.size());

  if (scheme == DerivativeScheme::Central) {
    const double inv = 1.0 / (2.0 * ax.spacing());
    for (std::size_t o = 0; o < n_other; ++o)
      for (std::size_t a = 0; a < na; ++a) {
        auto dst = out.segment(static_cast<Eigen::Index>(node(a, o) * block), b);
        const auto up = neighbour(ax, a, 1);
        const auto dn = neighbour(ax, a, -1);
        if (up < na) dst += inv * data.segment(static_cast<Eigen::Index>(node(up, o) * block), b);
        if (dn < na) dst -= inv * data.segment(static_cast<Eigen::Index>(node(dn, o) * block), b);
      }
    return out;
  }

  if (!ax.periodic()) throw ConfigError("spectral classical derivative requires a periodic axis");
  Dft dft(na);
  std::vector<cplx> line(na);
  for (std::size_t o = 0; o < n_other; ++o)
    for (std::size_t e = 0; e < block; ++e) {
      for (std::size_t a = 0; a < na; ++a) line[a] = data(static_cast<Eigen::Index>(node(a, o) * block + e));
      dft.forward(line);
      for (std::size_t k = 0; k < na; ++k) {
        const double kk = (na % 2 == 0 && k == na / 2) ? 0.0 : wavenumber(k, na, ax.spacing());
        line[k] *= cplx(0.0, kk);
      }
      dft.inverse(line);
      for (std::size_t a = 0; a < na; ++a) out(static_cast<Eigen::Index>(node(a, o) * block + e)) = line[a];
    }
  return out;
}

inline double max_abs_momentum(const SpatialGrid& p) {
  return std::max(std::abs(p.point(0)), std::abs(p.point(p.size() - 1)));
}

/// Stability bound shared by both representations.
inline double stable_dt(const HybridHamiltonian& h, double safety) {
  const auto& g = h.classical();
  const double pmax = max_abs_momentum(g.p());
  double fmax = 0.0, vmin = 0.0, vmax = 0.0;
  bool first = true;
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t j = 0; j < h.quantum().size(); ++j) {
      const double q = g.q().point(iq), x = h.quantum().point(j);
      fmax = std::max(fmax, std::abs(h.potential().dq(q, x)));
      const double v = h.potential()(q, x);
      vmin = first ? v : std::min(vmin, v);
      vmax = first ? v : std::max(vmax, v);
      first = false;
    }
  double bound = h.hbar() / (h.kinetic().spectral_width() + (vmax - vmin));
  if (pmax > 0.0) bound = std::min(bound, g.q().spacing() / pmax);
  if (fmax > 0.0) bound = std::min(bound, g.p().spacing() / fmax);
  return safety * bound;
}

}  // namespace detail

/// 𝓛 in the configuration representation:
///   𝓛A = (i/ħ)[H(X), A] + p ∂_q A − ½(∂_qφ(q,ξ) + ∂_qφ(q,ξ′)) ∂_p A
/// acting on kernels A(q,p; ξ,ξ′). The force multiplier is the kernel form of the
/// symmetrized bracket ½({A,H} − {H,A}) for H_int diagonal in ξ.
class GeneratorConfigRep {
 public:
  GeneratorConfigRep() = default;
  explicit GeneratorConfigRep(HybridHamiltonian h, DerivativeScheme dq = DerivativeScheme::Central,
                              DerivativeScheme dp = DerivativeScheme::Central)
      : h_(std::move(h)), dq_(dq), dp_(dp) {
    if (dq_ == DerivativeScheme::Spectral && !h_.classical().q().periodic())
      throw ConfigError("spectral d/dq requires a periodic q axis");
    if (dp_ == DerivativeScheme::Spectral && !h_.classical().p().periodic())
      throw ConfigError("spectral d/dp requires a periodic p axis");
    const auto& g = h_.classical();
    potential_.reserve(g.q().size());
    force_.reserve(g.q().size());
    for (std::size_t iq = 0; iq < g.q().size(); ++iq) {
      const double q = g.q().point(iq);
      const Eigen::VectorXd v = h_.h_int(q);
      const Eigen::VectorXd f = h_.h_int_dq(q);
      const auto n = v.size();
      Matrix vm(n, n), fm(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          vm(i, j) = cplx(0.0, (v(i) - v(j)) / h_.hbar());
          fm(i, j) = -0.5 * (f(i) + f(j));
        }
      potential_.push_back(std::move(vm));
      force_.push_back(std::move(fm));
    }
  }

  const HybridHamiltonian& hamiltonian() const { return h_; }
  DerivativeScheme q_scheme() const { return dq_; }
  DerivativeScheme p_scheme() const { return dp_; }
  /// (i/ħ)(φ(q,ξ_i) − φ(q,ξ_j)) at classical row iq.
  const Matrix& potential_multiplier(std::size_t iq) const { return potential_[iq]; }
  /// −½(∂_qφ(q,ξ_i) + ∂_qφ(q,ξ_j)) at classical row iq.
  const Matrix& force_multiplier(std::size_t iq) const { return force_[iq]; }

  double max_stable_dt(double safety = 0.5) const { return detail::stable_dt(h_, safety); }

 private:
  HybridHamiltonian h_;
  DerivativeScheme dq_ = DerivativeScheme::Central;
  DerivativeScheme dp_ = DerivativeScheme::Central;
  std::vector<Matrix> potential_, force_;
};

inline HybridDensityField apply_generator_config(const GeneratorConfigRep& gen, const HybridDensityField& a) {
  const auto& h = gen.hamiltonian();
  require_same(h.classical(), a.classical(), "apply_generator_config");
  require_same(h.quantum(), a.quantum(), "apply_generator_config");
  const auto& g = a.classical();
  const std::size_t block = a.block_size();
  const Vector dq = detail::classical_derivative(g, a.data(), block, Axis::Q, gen.q_scheme());
  const Vector dp = detail::classical_derivative(g, a.data(), block, Axis::P, gen.p_scheme());

  HybridDensityField out(g, a.quantum(), a.role());
  const cplx i_over_hbar(0.0, 1.0 / h.hbar());
  const auto n = static_cast<Eigen::Index>(a.n());
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      const auto m = a.at(x);
      auto o = out.at(x);
      o = i_over_hbar * h.kinetic().commutator(m);
      o += gen.potential_multiplier(iq).cwiseProduct(m);
      const double p = g.p().point(ip);
      Eigen::Map<const Matrix> mq(dq.data() + x * block, n, n);
      Eigen::Map<const Matrix> mp(dp.data() + x * block, n, n);
      o += p * mq;
      o += gen.force_multiplier(iq).cwiseProduct(mp);
    }
  return out;
}

}  // namespace qcsim
