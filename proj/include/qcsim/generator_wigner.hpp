#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "qcsim/generator.hpp"
#include "qcsim/wigner.hpp"

namespace qcsim {

/// How the classical force acts on the symbol.
///  Symmetrized: η-space multiplier −½(∂_qφ(q₁,q₂+η/2) + ∂_qφ(q₁,q₂−η/2)), the exact
///               Weyl image of the configuration-representation bracket.
///  Local:       −∂_{q₁}φ(q₁,q₂)·∂_{p₁}A evaluated pointwise. Both agree for
///               potentials of degree ≤ 2.
enum class ForceTerm { Symmetrized, Local };

inline const char* to_string(ForceTerm f) { return f == ForceTerm::Local ? "local" : "symmetrized"; }

/// 𝓛 in the Wigner representation:
///   Σ_j p_j ∂_{q_j}A − ∂_{q₁}φ ∂_{p₁}A + (integral term),
/// where the integral term is applied as FFT over p₂ → multiply by
/// (i/ħ)(φ(q₁, q₂+η/2) − φ(q₁, q₂−η/2)) → inverse FFT. The quantum streaming
/// p₂∂_{q₂} uses the lattice image of the 3-point kinetic commutator, which equals
/// p̃₂·δ_{q₂} with p̃₂ = (ħ/dx)·sin(p₂dx/ħ) and δ the central difference on the
/// half-step lattice (plus the periodic seam).
class GeneratorWignerRep {
 public:
  GeneratorWignerRep() = default;
  GeneratorWignerRep(HybridHamiltonian h, ForceTerm force = ForceTerm::Symmetrized,
                     DerivativeScheme dq = DerivativeScheme::Central, DerivativeScheme dp = DerivativeScheme::Central)
      : h_(std::move(h)), lattice_(h_.quantum(), h_.hbar()), force_term_(force), dq_(dq), dp_(dp) {
    if (!h_.quantum().periodic()) throw UnsupportedError("Wigner representation requires a periodic quantum grid");
    if (h_.kinetic().scheme() != KineticScheme::FiniteDifference)
      throw CapabilityError("Wigner representation supports the finite-difference kinetic scheme only");
    build();
  }

  const HybridHamiltonian& hamiltonian() const { return h_; }
  const WignerLattice& lattice() const { return lattice_; }
  ForceTerm force_term() const { return force_term_; }
  DerivativeScheme q_scheme() const { return dq_; }
  DerivativeScheme p_scheme() const { return dp_; }
  double max_stable_dt(double safety = 0.5) const { return detail::stable_dt(h_, safety); }

  // Precomputed η-space tables, index (c·n + slot) or (iq·lines·n + c·n + slot).
  const std::vector<char>& valid() const { return valid_; }
  const std::vector<std::array<std::int64_t, 4>>& kinetic_neighbours() const { return neigh_; }
  const std::vector<cplx>& potential_kernel() const { return pot_; }
  const std::vector<double>& force_kernel() const { return force_; }

 private:
  void build() {
    const auto& l = lattice_;
    const std::size_t n = l.n(), lines = l.lines(), cells = lines * n;
    valid_.assign(cells, 0);
    neigh_.assign(cells, {-1, -1, -1, -1});
    const auto& g = h_.classical();
    pot_.assign(g.q().size() * cells, cplx(0.0));
    force_.assign(g.q().size() * cells, 0.0);
    auto cell_of = [&](long i, long j) -> std::int64_t {
      const auto nn = static_cast<long>(n);
      i = ((i % nn) + nn) % nn;
      j = ((j % nn) + nn) % nn;
      const long c = i + j, d = i - j;
      const long m = (d - (c & 1L)) / 2;
      const long slot = ((m % nn) + nn) % nn;
      return static_cast<std::int64_t>(c) * nn + slot;
    };
    for (std::size_t c = 0; c < lines; ++c)
      for (std::size_t slot = 0; slot < n; ++slot) {
        std::size_t i = 0, j = 0;
        const std::size_t cell = c * n + slot;
        if (!l.indices(c, l.separation(c, slot), i, j)) continue;
        valid_[cell] = 1;
        const auto li = static_cast<long>(i), lj = static_cast<long>(j);
        neigh_[cell] = {cell_of(li + 1, lj), cell_of(li - 1, lj), cell_of(li, lj + 1), cell_of(li, lj - 1)};
        const double q2 = l.q(c);
        const double half_eta = 0.5 * static_cast<double>(l.separation(c, slot)) * l.quantum().spacing();
        for (std::size_t iq = 0; iq < g.q().size(); ++iq) {
          const double q1 = g.q().point(iq);
          const double up = q2 + half_eta, dn = q2 - half_eta;
          pot_[iq * cells + cell] = cplx(0.0, (h_.potential()(q1, up) - h_.potential()(q1, dn)) / h_.hbar());
          force_[iq * cells + cell] = -0.5 * (h_.potential().dq(q1, up) + h_.potential().dq(q1, dn));
        }
      }
  }

  HybridHamiltonian h_;
  WignerLattice lattice_;
  ForceTerm force_term_ = ForceTerm::Symmetrized;
  DerivativeScheme dq_ = DerivativeScheme::Central;
  DerivativeScheme dp_ = DerivativeScheme::Central;
  std::vector<char> valid_;
  std::vector<std::array<std::int64_t, 4>> neigh_;
  std::vector<cplx> pot_;
  std::vector<double> force_;
};

inline WignerField apply_generator_wigner(const GeneratorWignerRep& gen, const WignerField& a) {
  const auto& l = gen.lattice();
  const auto& g = a.classical();
  require_same(gen.hamiltonian().classical(), g, "apply_generator_wigner");
  if (!(l == a.lattice())) throw GridError("apply_generator_wigner: Wigner lattice mismatch");

  const std::size_t n = l.n(), cells = l.size();
  const Vector dq1 = detail::classical_derivative(g, a.data(), cells, Axis::Q, gen.q_scheme());
  const Vector dp1 = detail::classical_derivative(g, a.data(), cells, Axis::P, gen.p_scheme());

  WignerField out(g, l, a.role());
  Dft dft(n);
  std::vector<cplx> buf(n), eta(cells), eta_dp(cells), res(cells), sym(cells);
  const double f = detail::weyl_factor(l.quantum(), a.role());
  const double dx = l.quantum().spacing();
  const cplx kin(0.0, -0.5 * gen.hamiltonian().hbar() / (dx * dx));  // (i/ħ)·(−ħ²/(2dx²))
  const bool symmetrized = gen.force_term() == ForceTerm::Symmetrized;
  const auto& valid = gen.valid();
  const auto& neigh = gen.kinetic_neighbours();
  const auto& pot = gen.potential_kernel();
  const auto& force = gen.force_kernel();

  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      const std::size_t off = a.index(x, 0, 0);
      detail::symbol_to_eta(a.data().data() + off, l, f, eta.data(), dft, buf);
      if (symmetrized) detail::symbol_to_eta(dp1.data() + off, l, f, eta_dp.data(), dft, buf);
      const cplx* potq = pot.data() + iq * cells;
      const double* forceq = force.data() + iq * cells;
      for (std::size_t cell = 0; cell < cells; ++cell) {
        if (!valid[cell]) {
          res[cell] = 0.0;
          continue;
        }
        const auto& nb = neigh[cell];
        cplx v = kin * (eta[static_cast<std::size_t>(nb[0])] + eta[static_cast<std::size_t>(nb[1])] -
                        eta[static_cast<std::size_t>(nb[2])] - eta[static_cast<std::size_t>(nb[3])]);
        v += potq[cell] * eta[cell];
        if (symmetrized) v += forceq[cell] * eta_dp[cell];
        res[cell] = v;
      }
      detail::eta_to_symbol(res.data(), l, f, sym.data(), dft, buf);

      const double p1 = g.p().point(ip);
      const double q1 = g.q().point(iq);
      for (std::size_t c = 0; c < l.lines(); ++c) {
        const double local_force = symmetrized ? 0.0 : -gen.hamiltonian().potential().dq(q1, l.q(c));
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t m = c * n + k;
          const auto idx = static_cast<Eigen::Index>(off + m);
          cplx v = sym[m] + p1 * dq1(idx);
          if (!symmetrized) v += local_force * dp1(idx);
          out.data()(idx) = v;
        }
      }
    }
  return out;
}

}  // namespace qcsim
