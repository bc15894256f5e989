#pragma once

#include <cmath>
#include <numbers>

#include "qcsim/observables.hpp"
#include "qcsim/wigner.hpp"

namespace qcsim {

/// Smearing widths of the classical Dirac measure.
struct Smearing {
  double sigma_q = 0.0;
  double sigma_p = 0.0;
  friend bool operator==(const Smearing&, const Smearing&) = default;
};

/// Default smearing: three grid cells in each direction.
inline Smearing default_smearing(const PhaseSpaceGrid& g) {
  return {3.0 * g.q().spacing(), 3.0 * g.p().spacing()};
}

/// Normalized Gaussian G_σ(X − X₀) on the phase-space grid (Σ w·G = 1).
inline ClassicalDistribution smeared_delta(const PhaseSpaceGrid& g, ClassicalPhasePoint x0, Smearing s) {
  if (s.sigma_q < 2.0 * g.q().spacing() - 1e-12 || s.sigma_p < 2.0 * g.p().spacing() - 1e-12)
    throw ResolutionError("smearing must be at least two grid cells in q and p");
  ClassicalDistribution d(g);
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const double dq = (g.q().point(iq) - x0.q) / s.sigma_q;
      const double dp = (g.p().point(ip) - x0.p) / s.sigma_p;
      d(iq, ip) = std::exp(-0.5 * (dq * dq + dp * dp));
    }
  d.data() /= d.normalization();
  return d;
}

/// D(X) = G_σ(X − X₀)·Ψ₀(ξ)Ψ₀*(ξ′).
inline HybridDensityField uncorrelated_pure_state(const PhaseSpaceGrid& g, ClassicalPhasePoint x0,
                                                  const WaveFunction& psi0, Smearing s) {
  return product_state(smeared_delta(g, x0, s), psi0.projector_kernel(), psi0.grid());
}

inline HybridDensityField uncorrelated_pure_state(const PhaseSpaceGrid& g, ClassicalPhasePoint x0,
                                                  const WaveFunction& psi0) {
  return uncorrelated_pure_state(g, x0, psi0, default_smearing(g));
}

/// Wigner function of G_σ(x₁ − x₀)·P_Ψ₀: the pure-state transform
/// ∫dη Ψ₀(q₂+η/2)Ψ₀*(q₂−η/2)e^{−ip₂η/ħ} evaluated by FFT over η per q₂ line.
inline WignerField wigner_of_pure_state(const PhaseSpaceGrid& g, ClassicalPhasePoint x0, const WaveFunction& psi0,
                                        Smearing s, double hbar) {
  const auto& qg = psi0.grid();
  if (!qg.periodic()) throw UnsupportedError("wigner_of_pure_state requires a periodic quantum grid");
  WignerLattice l(qg, hbar);
  if (l.momenta() != qg.size()) throw GridError("p2 axis is not commensurate with the FFT length");
  const ClassicalDistribution gs = smeared_delta(g, x0, s);

  // Symbol of the quantum factor alone.
  std::vector<cplx> sym(l.size()), buf(l.n());
  Dft dft(l.n());
  const auto& psi = psi0.amplitudes();
  const double factor = detail::weyl_factor(qg, Role::State);
  for (std::size_t c = 0; c < l.lines(); ++c) {
    for (std::size_t slot = 0; slot < l.n(); ++slot) {
      std::size_t i = 0, j = 0;
      buf[slot] = l.indices(c, l.separation(c, slot), i, j)
                      ? psi(static_cast<Eigen::Index>(i)) * std::conj(psi(static_cast<Eigen::Index>(j)))
                      : cplx(0.0);
    }
    dft.forward(buf);
    for (std::size_t k = 0; k < l.n(); ++k) {
      const long kk = static_cast<long>(k) - l.k_offset();
      const auto n = static_cast<long>(l.n());
      const auto bin = static_cast<std::size_t>(((kk % n) + n) % n);
      const double phase = -std::numbers::pi * static_cast<double>(kk) * static_cast<double>(c % 2) / static_cast<double>(n);
      sym[c * l.n() + k] = factor * std::polar(1.0, phase) * buf[bin];
    }
  }

  WignerField w(g, l, Role::State);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double gx = gs.data()(static_cast<Eigen::Index>(x));
    for (std::size_t m = 0; m < l.size(); ++m) w.data()(static_cast<Eigen::Index>(x * l.size() + m)) = gx * sym[m];
  }
  return w;
}

}  // namespace qcsim
