#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace qcsim;
using qcsim::testing::random_state;
using qcsim::testing::small_phase_grid;

TEST(Grid, InvariantsAndSpacing) {
  EXPECT_THROW(SpatialGrid(1.0, 0.0, 8), GridError);
  EXPECT_THROW(SpatialGrid(0.0, 1.0, 1), GridError);
  SpatialGrid per(0.0, 1.0, 4, Boundary::Periodic);
  SpatialGrid bnd(0.0, 1.0, 5, Boundary::Bounded);
  EXPECT_DOUBLE_EQ(per.spacing(), 0.25);
  EXPECT_DOUBLE_EQ(bnd.spacing(), 0.25);
  EXPECT_DOUBLE_EQ(bnd.weight(0), 0.125);
  EXPECT_DOUBLE_EQ(per.weight(0), 0.25);
}

TEST(Grid, MixedGridArithmeticRejected) {
  HybridDensityField a(small_phase_grid(), SpatialGrid(-2, 2, 4), Role::Observable);
  HybridDensityField b(small_phase_grid(), SpatialGrid(-2, 2, 5), Role::Observable);
  EXPECT_THROW(a += b, GridError);
}

TEST(Hamiltonian, ZeroCouplingHasPureLaplacian) {
  const SpatialGrid qg(-3.0, 3.0, 6);
  const auto h = build_hamiltonian(small_phase_grid(4, 4), qg, potentials::Zero{}, 1.0);
  for (std::size_t iq = 0; iq < 4; ++iq) EXPECT_EQ(h.h_int(h.classical().q().point(iq)).cwiseAbs().maxCoeff(), 0.0);
  const double c = -0.5 / (qg.spacing() * qg.spacing());
  for (Eigen::Index i = 0; i < 6; ++i) {
    EXPECT_NEAR(h.h_q()(i, i).real(), -2.0 * c, 1e-12);
    EXPECT_NEAR(h.h_q()(i, (i + 1) % 6).real(), c, 1e-12);
    EXPECT_NEAR(h.h_q()(i, (i + 5) % 6).real(), c, 1e-12);
  }
  EXPECT_LE((h.h_q() - h.h_q().adjoint()).cwiseAbs().maxCoeff(), 1e-12 * h.h_q().cwiseAbs().maxCoeff());
}

TEST(Hamiltonian, HarmonicInteractionEntry) {
  // q = 0 is a grid point of [-4,4) with 8 nodes; ξ = 2 is a node of [-4,4) with 8 nodes.
  const auto h = build_hamiltonian(small_phase_grid(), SpatialGrid(-4.0, 4.0, 8), potentials::Harmonic{1.0});
  EXPECT_DOUBLE_EQ(h.h_int(0.0)(6), 2.0);
}

TEST(Hamiltonian, TabulatedRangeChecked) {
  std::vector<double> vals(21, 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::cos(0.1 * static_cast<double>(i));
  const potentials::Tabulated narrow(-2.0, 2.0, vals);
  EXPECT_THROW(build_hamiltonian(small_phase_grid(), SpatialGrid(-4, 4, 8), narrow), RangeError);
  const potentials::Tabulated wide(-9.0, 9.0, vals);
  EXPECT_NO_THROW(build_hamiltonian(small_phase_grid(), SpatialGrid(-4, 4, 8), wide));
}

TEST(Potential, TabulatedSplineReproducesSmoothFunction) {
  std::vector<double> vals;
  const int n = 81;
  for (int i = 0; i < n; ++i) {
    const double r = -4.0 + 8.0 * i / (n - 1);
    vals.push_back(std::exp(-r * r / 2.0));
  }
  const Potential phi = potentials::Tabulated(-4.0, 4.0, vals);
  const Potential exact = potentials::GaussianBump{1.0, 1.0};
  for (double r = -3.0; r <= 3.0; r += 0.137) {
    EXPECT_NEAR(phi(r, 0.0), exact(r, 0.0), 2e-5);
    EXPECT_NEAR(phi.dq(r, 0.0), exact.dq(r, 0.0), 5e-4);
  }
}

TEST(Hamiltonian, SpectralAndFiniteDifferenceKineticAgreeToSecondOrder) {
  // Analytic: −½ψ'' for ψ = exp(−x²/2) is ½(1 − x²)ψ.
  auto err = [](std::size_t n, KineticScheme s) {
    const SpatialGrid g(-10.0, 10.0, n);
    const KineticOperator t(g, 1.0, s);
    Vector psi(static_cast<Eigen::Index>(n)), exact(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.point(i);
      psi(static_cast<Eigen::Index>(i)) = std::exp(-x * x / 2.0);
      exact(static_cast<Eigen::Index>(i)) = 0.5 * (1.0 - x * x) * std::exp(-x * x / 2.0);
    }
    return (t.matrix() * psi - exact).cwiseAbs().maxCoeff();
  };
  const double fd1 = err(64, KineticScheme::FiniteDifference), fd2 = err(128, KineticScheme::FiniteDifference);
  const double sp1 = err(64, KineticScheme::Spectral);
  EXPECT_LT(sp1, 1e-10);
  EXPECT_NEAR(fd1 / fd2, 4.0, 0.2);
  const double dx = 20.0 / 64.0;
  EXPECT_LT(fd1, 0.5 * dx * dx);
  EXPECT_THROW(KineticOperator(SpatialGrid(-1, 1, 8, Boundary::Bounded), 1.0, KineticScheme::Spectral), ConfigError);
}

namespace {

struct Product {
  PhaseSpaceGrid g = small_phase_grid(16, 16);
  SpatialGrid qg{-6.0, 6.0, 24};
  WaveFunction psi = WaveFunction::gaussian(qg, 0.5, 1.0, 0.3);
  ClassicalPhasePoint x0{0.0, 0.5};
  Smearing s{1.5, 1.5};
  HybridDensityField d = uncorrelated_pure_state(g, x0, psi, s);
};

}  // namespace

TEST(Marginals, ProductStateRecoversFactors) {
  Product p;
  const auto dc = marginal_classical(p.d);
  const auto blob = smeared_delta(p.g, p.x0, p.s);
  EXPECT_LE((dc.data() - blob.data()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(dc.normalization(), 1.0, 1e-8);
  const Matrix rho = marginal_quantum(p.d);
  EXPECT_LE((rho - p.psi.projector_kernel()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(kernel_trace(rho, p.qg), 1.0, 1e-8);
}

TEST(Marginals, TracelessPerturbationLeavesClassicalMarginal) {
  Product p;
  // g_test(X) = f(X)·(|a⟩⟨a| − |b⟩⟨b|)/dξ with orthonormal-on-grid a, b: Tr g_test·dξ = 0.
  const auto n = static_cast<Eigen::Index>(p.qg.size());
  Vector a = Vector::Zero(n), b = Vector::Zero(n);
  a(10) = 1.0;
  b(13) = 1.0;
  HybridDensityField gt(p.g, p.qg, Role::State);
  for (std::size_t iq = 0; iq < 16; ++iq)
    for (std::size_t ip = 0; ip < 16; ++ip) {
      const double f = std::exp(-0.3 * (p.g.q().point(iq) * p.g.q().point(iq)));
      gt.at(iq, ip) = f * (a * a.adjoint() - b * b.adjoint()) / p.qg.spacing();
    }
  HybridDensityField d = p.d + 0.01 * gt;
  EXPECT_LE((marginal_classical(d).data() - marginal_classical(p.d).data()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Marginals, ObservableRoleRejected) {
  HybridDensityField a(small_phase_grid(), SpatialGrid(-2, 2, 4), Role::Observable);
  EXPECT_THROW(marginal_classical(a), RoleError);
  EXPECT_THROW(marginal_quantum(a), RoleError);
  EXPECT_THROW(correlation(a), RoleError);
}

TEST(Correlation, ProductStateIsUncorrelated) {
  Product p;
  EXPECT_LE(correlation(p.d).max_abs(), 1e-12);
}

TEST(Correlation, MarginalsOfCorrelationVanishForRandomStates) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_state(small_phase_grid(6, 5), SpatialGrid(-2, 2, 4), rng);
    const auto g = correlation(d);
    HybridDensityField gs = g;
    gs.set_role(Role::State);
    EXPECT_LE(marginal_classical(gs).data().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(marginal_quantum(gs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MeanValue, IdentityAndClassicalPosition) {
  Product p;
  EXPECT_NEAR(mean_value(observables::identity(p.g, p.qg), p.d), 1.0, 1e-12);
  EXPECT_NEAR(mean_value(observables::q_c(p.g, p.qg), p.d), p.x0.q, p.g.q().spacing());
  EXPECT_NEAR(mean_value(observables::q_q(p.g, p.qg), p.d), 0.5, 1e-6);  // tail cut at ±6
  EXPECT_THROW(mean_value(p.d, p.d), RoleError);
  HybridDensityField other(small_phase_grid(4, 4), p.qg, Role::Observable);
  EXPECT_THROW(mean_value(other, p.d), GridError);
}

TEST(MeanValue, ImaginaryResidueRejected) {
  Product p;
  auto a = observables::identity(p.g, p.qg);
  a *= cplx(0.0, 1.0);
  EXPECT_THROW(mean_value(a, p.d), NumericalError);
}

TEST(MeanValue, EnergyMatchesAnalyticQuadrature) {
  // Harmonic coupling, Gaussian packets: every term has a closed form in the continuum.
  const PhaseSpaceGrid g(SpatialGrid(-8.0, 8.0, 64), SpatialGrid(-8.0, 8.0, 64));
  const SpatialGrid qg(-12.0, 12.0, 96);
  const double xi0 = 0.7, sig = 1.1, k0 = 0.4, q0 = -0.5, p0 = 0.8, sq = 1.0, sp = 1.2;
  const auto psi = WaveFunction::gaussian(qg, xi0, sig, k0);
  const auto d = uncorrelated_pure_state(g, {q0, p0}, psi, {sq, sp});
  const auto h = build_hamiltonian(g, qg, potentials::Harmonic{1.0}, 1.0, KineticScheme::Spectral);
  const double classical = 0.5 * (p0 * p0 + sp * sp);
  const double quantum = 0.5 * (k0 * k0 + 1.0 / (4.0 * sig * sig));
  const double coupling = 0.5 * ((q0 - xi0) * (q0 - xi0) + sq * sq + sig * sig);
  EXPECT_NEAR(total_energy(d, h), classical + quantum + coupling, 1e-6 * (classical + quantum + coupling));
}

TEST(MeanValue, ZeroCouplingEnergySeparates) {
  Product p;
  const auto h = build_hamiltonian(p.g, p.qg, potentials::Zero{});
  const double classical = mean_value(observables::classical(p.g, p.qg, [](double, double pp) { return 0.5 * pp * pp; }), p.d);
  const double quantum = mean_value(observables::quantum(p.g, p.qg, h.h_q()), p.d);
  EXPECT_NEAR(total_energy(p.d, h), classical + quantum, 1e-12);
}

TEST(PureState, ConstructionInvariants) {
  Product p;
  EXPECT_NO_THROW(p.d.check_state());
  EXPECT_NEAR(p.d.normalization(), 1.0, 1e-8);
  EXPECT_THROW(uncorrelated_pure_state(p.g, p.x0, p.psi, {0.5 * p.g.q().spacing(), p.s.sigma_p}), ResolutionError);
}

TEST(PureState, ClassicalMeanConvergesUnderSmearing) {
  const PhaseSpaceGrid g(SpatialGrid(-4.0, 4.0, 32), SpatialGrid(-4.0, 4.0, 32));
  const SpatialGrid qg(-4, 4, 8);
  const auto psi = WaveFunction::gaussian(qg, 0.0, 1.0, 0.0);
  // X₀ off the grid nodes: direct quadrature of q against G_σ.
  const ClassicalPhasePoint x0{0.13, -0.21};
  for (double cells : {4.0, 3.0, 2.0}) {
    const auto d = uncorrelated_pure_state(g, x0, psi, {cells * g.q().spacing(), cells * g.p().spacing()});
    EXPECT_NEAR(mean_value(observables::q_c(g, qg), d), x0.q, g.q().spacing());
    EXPECT_NEAR(mean_value(observables::p_c(g, qg), d), x0.p, g.p().spacing());
  }
}
