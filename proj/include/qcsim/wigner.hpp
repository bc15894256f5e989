#pragma once

#include <cmath>
#include <numbers>

#include "qcsim/fft.hpp"
#include "qcsim/fields.hpp"

namespace qcsim {

namespace detail {

/// Scale between Σ_d K e^{−ipη/ħ} and the Weyl symbol: each parity
/// sublattice samples η with step 2dx; observables carry an extra 1/dξ.
inline double weyl_factor(const SpatialGrid& g, Role role) {
  return role == Role::State ? 2.0 * g.spacing() : 2.0;
}

/// Forward transform of one kernel into the (lines × momenta) block at `out`.
inline void kernel_to_symbol(const Eigen::Ref<const Matrix>& kernel, const WignerLattice& l, double factor,
                             cplx* out, Dft& dft, std::vector<cplx>& buf) {
  const std::size_t n = l.n();
  for (std::size_t c = 0; c < l.lines(); ++c) {
    for (std::size_t slot = 0; slot < n; ++slot) {
      std::size_t i = 0, j = 0;
      buf[slot] = l.indices(c, l.separation(c, slot), i, j)
                      ? kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                      : cplx(0.0);
    }
    dft.forward(buf);
    const double s = static_cast<double>(c % 2);
    for (std::size_t k = 0; k < n; ++k) {
      const long kk = static_cast<long>(k) - l.k_offset();
      const auto bin = static_cast<std::size_t>(((kk % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
      const double phase = -std::numbers::pi * static_cast<double>(kk) * s / static_cast<double>(n);
      out[c * n + k] = factor * std::polar(1.0, phase) * buf[bin];
    }
  }
}

/// Separation-space (η) samples of one symbol block: line c, slot → value.
inline void symbol_to_eta(const cplx* in, const WignerLattice& l, double factor, cplx* eta, Dft& dft,
                          std::vector<cplx>& buf) {
  const std::size_t n = l.n();
  for (std::size_t c = 0; c < l.lines(); ++c) {
    const double s = static_cast<double>(c % 2);
    for (std::size_t k = 0; k < n; ++k) {
      const long kk = static_cast<long>(k) - l.k_offset();
      const auto bin = static_cast<std::size_t>(((kk % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
      const double phase = std::numbers::pi * static_cast<double>(kk) * s / static_cast<double>(n);
      buf[bin] = in[c * n + k] * std::polar(1.0, phase) / factor;
    }
    dft.inverse(buf);
    for (std::size_t slot = 0; slot < n; ++slot) eta[c * n + slot] = buf[slot];
  }
}

inline void eta_to_symbol(const cplx* eta, const WignerLattice& l, double factor, cplx* out, Dft& dft,
                          std::vector<cplx>& buf) {
  const std::size_t n = l.n();
  for (std::size_t c = 0; c < l.lines(); ++c) {
    for (std::size_t slot = 0; slot < n; ++slot) buf[slot] = eta[c * n + slot];
    dft.forward(buf);
    const double s = static_cast<double>(c % 2);
    for (std::size_t k = 0; k < n; ++k) {
      const long kk = static_cast<long>(k) - l.k_offset();
      const auto bin = static_cast<std::size_t>(((kk % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
      const double phase = -std::numbers::pi * static_cast<double>(kk) * s / static_cast<double>(n);
      out[c * n + k] = factor * std::polar(1.0, phase) * buf[bin];
    }
  }
}

}  // namespace detail

/// Weyl symbol A(q₂, p₂) = ∫dη A(q₂+η/2, q₂−η/2) e^{−ip₂η/ħ}, applied kernel-wise
/// at every classical node, on the half-step lattice described by WignerLattice.
inline WignerField wigner_transform(const HybridDensityField& a, double hbar = 1.0) {
  if (!a.quantum().periodic()) throw UnsupportedError("wigner_transform requires a periodic quantum grid");
  WignerLattice lattice(a.quantum(), hbar);
  WignerField w(a.classical(), lattice, a.role());
  Dft dft(lattice.n());
  std::vector<cplx> buf(lattice.n());
  const double f = detail::weyl_factor(a.quantum(), a.role());
  for (std::size_t x = 0; x < a.points(); ++x)
    detail::kernel_to_symbol(a.at(x), lattice, f, w.data().data() + w.index(x, 0, 0), dft, buf);
  return w;
}

inline HybridDensityField inverse_wigner_transform(const WignerField& w) {
  const auto& l = w.lattice();
  if (!l.quantum().periodic()) throw UnsupportedError("inverse_wigner_transform requires a periodic quantum grid");
  HybridDensityField a(w.classical(), l.quantum(), w.role());
  Dft dft(l.n());
  std::vector<cplx> buf(l.n()), eta(l.size());
  const double f = detail::weyl_factor(l.quantum(), w.role());
  for (std::size_t x = 0; x < a.points(); ++x) {
    detail::symbol_to_eta(w.data().data() + w.index(x, 0, 0), l, f, eta.data(), dft, buf);
    auto m = a.at(x);
    for (std::size_t c = 0; c < l.lines(); ++c)
      for (std::size_t slot = 0; slot < l.n(); ++slot) {
        std::size_t i = 0, j = 0;
        if (l.indices(c, l.separation(c, slot), i, j))
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eta[c * l.n() + slot];
      }
  }
  return a;
}

/// ⟨A⟩ = (2πħ)^{-1}·Σ w₄·A·D.
inline double mean_value_wigner(const WignerField& a, const WignerField& d, double hbar) {
  if (!a.same_shape(d)) throw GridError("mean_value_wigner: fields live on different grids");
  if (std::abs(hbar - d.hbar()) > 1e-15 * hbar) throw GridError("mean_value_wigner: hbar does not match the lattice");
  const auto& g = d.classical();
  const auto& l = d.lattice();
  cplx s = 0.0;
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      const auto off = static_cast<Eigen::Index>(a.index(x, 0, 0));
      const auto len = static_cast<Eigen::Index>(l.size());
      s += g.weight(iq, ip) * (a.data().segment(off, len).cwiseProduct(d.data().segment(off, len))).sum();
    }
  return (s * l.weight() / (2.0 * std::numbers::pi * hbar)).real();
}

/// (2πħ)^{-1}·Σ w₄·W; the identity's symbol is 2 on even lines and 0 on odd ones.
inline double wigner_normalization(const WignerField& d) {
  const auto& g = d.classical();
  const auto& l = d.lattice();
  cplx s = 0.0;
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      cplx line = 0.0;
      for (std::size_t c = 0; c < l.lines(); c += 2)
        for (std::size_t k = 0; k < l.momenta(); ++k) line += d(x, c, k);
      s += g.weight(iq, ip) * 2.0 * line;
    }
  return (s * l.weight() / (2.0 * std::numbers::pi * l.hbar())).real();
}

}  // namespace qcsim
