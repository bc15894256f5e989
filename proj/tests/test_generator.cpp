#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace qcsim;
using qcsim::testing::random_hermitian;
using qcsim::testing::random_localized;
using qcsim::testing::random_state;
using qcsim::testing::small_phase_grid;

namespace {

// Σ_X w Σ_ij A_ij D_ji w_i, written out longhand.
cplx pair_longhand(const HybridDensityField& a, const HybridDensityField& d) {
  const auto& g = a.classical();
  const auto& qg = a.quantum();
  cplx s = 0.0;
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip)
      for (std::size_t i = 0; i < qg.size(); ++i)
        for (std::size_t j = 0; j < qg.size(); ++j)
          s += g.weight(iq, ip) * qg.weight(i) * a.at(iq, ip)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
               d.at(iq, ip)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  return s;
}

double interior_max(const HybridDensityField& f, std::size_t margin) {
  const auto& g = f.classical();
  double m = 0.0;
  for (std::size_t iq = margin; iq + margin < g.q().size(); ++iq)
    for (std::size_t ip = margin; ip + margin < g.p().size(); ++ip) m = std::max(m, f.at(iq, ip).cwiseAbs().maxCoeff());
  return m;
}

double interior_max(const WignerField& f, std::size_t margin) {
  const auto& g = f.classical();
  const auto len = static_cast<Eigen::Index>(f.lattice().size());
  double m = 0.0;
  for (std::size_t iq = margin; iq + margin < g.q().size(); ++iq)
    for (std::size_t ip = margin; ip + margin < g.p().size(); ++ip)
      m = std::max(m, f.data().segment(static_cast<Eigen::Index>(f.index(g.index(iq, ip), 0, 0)), len).cwiseAbs().maxCoeff());
  return m;
}

HybridHamiltonian coupled(std::size_t nc, std::size_t nqu, const Potential& phi = potentials::Harmonic{1.0}) {
  const PhaseSpaceGrid g(SpatialGrid(-3.0, 3.0, nc), SpatialGrid(-3.0, 3.0, nc));
  return build_hamiltonian(g, SpatialGrid(-3.0, 3.0, nqu), phi);
}

}  // namespace

TEST(GeneratorConfig, AnnihilatesHamiltonianAtSecondOrder) {
  // The residual is p·(D_q − ∂_q)φ: the boundary rows see the periodic wrap of a
  // non-periodic H, so the measurement is over interior nodes.
  auto residual = [](std::size_t nc) {
    const auto h = coupled(nc, 6, potentials::GaussianBump{1.0, 1.0});
    const GeneratorConfigRep gen(h);
    return interior_max(apply_generator_config(gen, h.as_observable()), 2);
  };
  const double r1 = residual(24), r2 = residual(48);
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r1 / r2, 4.0, 0.4);
}

TEST(GeneratorConfig, FreeHeisenbergPositionGivesMomentum) {
  const auto h = coupled(4, 10, potentials::Zero{});
  const GeneratorConfigRep gen(h);
  const auto out = apply_generator_config(gen, observables::q_q(h.classical(), h.quantum()));
  const Matrix p = h.kinetic().momentum_matrix();
  const auto n = static_cast<Eigen::Index>(h.quantum().size());
  for (std::size_t x = 0; x < out.points(); ++x)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(i - j) == n - 1) continue;  // periodic seam: x̂ jumps by L there
        EXPECT_LE(std::abs(out.at(x)(i, j) - p(i, j)), 1e-12);
      }
}

TEST(GeneratorConfig, LinearAndHermiticityPreserving) {
  std::mt19937_64 rng(1);
  const GeneratorConfigRep gen(coupled(6, 5));
  const auto& h = gen.hamiltonian();
  const auto a = random_hermitian(h.classical(), h.quantum(), Role::Observable, rng);
  const auto b = random_hermitian(h.classical(), h.quantum(), Role::Observable, rng);
  const cplx al(0.3, -1.2), be(2.0, 0.5);
  const auto lhs = apply_generator_config(gen, al * a + be * b);
  const auto rhs = al * apply_generator_config(gen, a) + be * apply_generator_config(gen, b);
  EXPECT_LE((lhs.data() - rhs.data()).cwiseAbs().maxCoeff(), 1e-12 * lhs.max_abs());
  const auto la = apply_generator_config(gen, a);
  EXPECT_LE(la.hermiticity_defect(), 1e-10 * la.max_abs());
  EXPECT_EQ(la.role(), Role::Observable);
}

TEST(GeneratorConfig, TraceIntegralConserved) {
  std::mt19937_64 rng(2);
  const GeneratorConfigRep gen(coupled(8, 6));
  const auto& h = gen.hamiltonian();
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_state(h.classical(), h.quantum(), rng);
    EXPECT_LE(std::abs(pairing(observables::identity(h.classical(), h.quantum()), apply_generator_config(gen, d))), 1e-9);
  }
}

TEST(GeneratorConfig, GridMismatchRejected) {
  const GeneratorConfigRep gen(coupled(6, 5));
  HybridDensityField a(small_phase_grid(6, 6), SpatialGrid(-3, 3, 5), Role::Observable);
  EXPECT_THROW(apply_generator_config(gen, a), GridError);
}

TEST(DenseGenerator, MatchesOperatorApplication) {
  std::mt19937_64 rng(4);
  const GeneratorConfigRep gen(coupled(4, 4));
  const auto dense = assemble_dense_generator(gen);
  const auto& h = gen.hamiltonian();
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_hermitian(h.classical(), h.quantum(), Role::Observable, rng);
    const Vector ref = apply_generator_config(gen, a).data();
    EXPECT_LE((dense.matrix * a.data() - ref).cwiseAbs().maxCoeff(), 1e-13 * ref.cwiseAbs().maxCoeff());
  }
}

TEST(DenseGenerator, AntiAdjointUnderPairing) {
  std::mt19937_64 rng(6);
  const GeneratorConfigRep gen(coupled(4, 4, potentials::GaussianBump{0.8, 0.7}));
  const auto dense = assemble_dense_generator(gen);
  const auto& h = gen.hamiltonian();
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_hermitian(h.classical(), h.quantum(), Role::Observable, rng);
    const auto d = random_state(h.classical(), h.quantum(), rng);
    const auto la = apply_generator_config(gen, a), ld = apply_generator_config(gen, d);
    const cplx s = pair_longhand(la, d) + pair_longhand(a, ld);
    EXPECT_LE(std::abs(s), 1e-9 * std::max(1.0, std::abs(pair_longhand(la, d))));
    EXPECT_LE(std::abs(dense.pair(dense.matrix * a.data(), d.data()) + dense.pair(a.data(), dense.matrix * d.data())), 1e-9 * std::max(1.0, std::abs(pair_longhand(la, d))));
  }
}

TEST(DenseGenerator, ZeroCouplingSpectrumIsImaginary) {
  const GeneratorConfigRep gen(coupled(4, 4, potentials::Zero{}));
  const auto dense = assemble_dense_generator(gen);
  Eigen::ComplexEigenSolver<Matrix> es(cplx(0.0, 1.0) * dense.matrix);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_LE(es.eigenvalues().imag().cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, scale));
}

TEST(DenseGenerator, CapEnforced) {
  const GeneratorConfigRep gen(coupled(8, 9));
  EXPECT_THROW(assemble_dense_generator(gen), SizeError);
}

TEST(GeneratorWigner, AnnihilatesHamiltonianSymbol) {
  auto residual = [](std::size_t nc) {
    const GeneratorWignerRep gen(coupled(nc, 6, potentials::GaussianBump{1.0, 1.0}));
    const auto w = wigner_transform(gen.hamiltonian().as_observable());
    return interior_max(apply_generator_wigner(gen, w), 2);
  };
  const double r1 = residual(24), r2 = residual(48);
  EXPECT_NEAR(r1 / r2, 4.0, 0.4);
}

TEST(GeneratorWigner, ConsistentWithConfiguration) {
  std::mt19937_64 rng(8);
  for (const Potential& phi : {Potential(potentials::Harmonic{1.0}), Potential(potentials::GaussianBump{1.0, 0.6})}) {
    const auto h = coupled(6, 7, phi);
    const GeneratorConfigRep cfg(h);
    const GeneratorWignerRep wig(h);
    for (Role role : {Role::Observable, Role::State}) {
      const auto a = random_hermitian(h.classical(), h.quantum(), role, rng);
      const auto lhs = wigner_transform(apply_generator_config(cfg, a));
      const auto rhs = apply_generator_wigner(wig, wigner_transform(a));
      EXPECT_LE((lhs.data() - rhs.data()).cwiseAbs().maxCoeff(), 1e-6 * lhs.max_abs());
      EXPECT_LE(rhs.imaginary_residue(), 1e-10 * rhs.max_abs());
    }
  }
}

TEST(GeneratorWigner, HarmonicIntegralTermIsClassicalForce) {
  // A uniform in p₁ removes the ∂_{p₁} term, so 𝓛_harm A − 𝓛_0 A is the integral
  // term alone; compare with k(q₁ − q₂)∂_{p₂}A by a central stencil in p₂.
  auto err = [](double half, std::size_t n) {
    const PhaseSpaceGrid g(SpatialGrid(-2.0, 2.0, 4), SpatialGrid(-2.0, 2.0, 4));
    const SpatialGrid qg(-half, half, n);
    const auto psi = WaveFunction::gaussian(qg, 0.3, 1.0, 0.2);
    HybridDensityField a(g, qg, Role::State);
    for (std::size_t iq = 0; iq < 4; ++iq)
      for (std::size_t ip = 0; ip < 4; ++ip) a.at(iq, ip) = (1.0 + 0.1 * g.q().point(iq)) * psi.projector_kernel();
    const auto w = wigner_transform(a);
    const GeneratorWignerRep harm(build_hamiltonian(g, qg, potentials::Harmonic{1.0}));
    const GeneratorWignerRep free(build_hamiltonian(g, qg, potentials::Zero{}));
    const WignerField integral = apply_generator_wigner(harm, w) - apply_generator_wigner(free, w);
    const auto& l = w.lattice();
    double e = 0.0;
    for (std::size_t iq = 0; iq < 4; ++iq) {
      const std::size_t x = g.index(iq, 1);
      for (std::size_t c = 0; c < l.lines(); ++c)
        for (std::size_t k = 1; k + 1 < l.momenta(); ++k) {
          const cplx dp = (w(x, c, k + 1) - w(x, c, k - 1)) / (2.0 * l.dp());
          const cplx ref = (g.q().point(iq) - l.q(c)) * dp;
          e = std::max(e, std::abs(integral(x, c, k) - ref));
        }
    }
    return std::pair{e, l.dp()};
  };
  const auto [e1, dp1] = err(8.0, 64);
  const auto [e2, dp2] = err(16.0, 128);
  EXPECT_NEAR(dp1 / dp2, 2.0, 1e-12);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(GeneratorWigner, LocalForceMatchesSymmetrizedForHarmonic) {
  std::mt19937_64 rng(9);
  const auto h = coupled(6, 6);
  const GeneratorWignerRep sym(h, ForceTerm::Symmetrized), loc(h, ForceTerm::Local);
  const auto w = wigner_transform(random_hermitian(h.classical(), h.quantum(), Role::State, rng));
  const auto a = apply_generator_wigner(sym, w), b = apply_generator_wigner(loc, w);
  // φ_q is linear in ξ for the harmonic coupling, so ½(φ_q(up) + φ_q(dn)) = φ_q(q₂)
  // up to the comb: the local form acts on every line, the kernel form on valid slots.
  const auto sa = inverse_wigner_transform(a), sb = inverse_wigner_transform(b);
  EXPECT_LE((sa.data() - sb.data()).cwiseAbs().maxCoeff(), 1e-9 * sa.max_abs());
}

TEST(GeneratorWigner, RequiresPeriodicFiniteDifference) {
  const PhaseSpaceGrid g = small_phase_grid(4, 4);
  EXPECT_THROW(GeneratorWignerRep(build_hamiltonian(g, SpatialGrid(-2, 2, 5, Boundary::Bounded), potentials::Zero{})),
               UnsupportedError);
  EXPECT_THROW(GeneratorWignerRep(build_hamiltonian(g, SpatialGrid(-2, 2, 6), potentials::Zero{}, 1.0, KineticScheme::Spectral)),
               CapabilityError);
}
