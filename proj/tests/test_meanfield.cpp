#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_util.hpp"

using namespace qcsim;

namespace {

IntegratorConfig config(double dt, double t, std::size_t stride = 1) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_final = t;
  c.stride = stride;
  return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Closed-form first moments for the harmonic pair: centre of mass drifts, the
// relative coordinate oscillates at ω = √(2k).
struct HarmonicMoments {
  double q, p, x, v;  // Q, P, ⟨ξ⟩, ⟨p̂⟩ at t = 0
  double k;
  std::array<double, 4> at(double t) const {
    const double w = std::sqrt(2.0 * k);
    const double cm = 0.5 * (q + x), vcm = 0.5 * (p + v);
    const double r = q - x, vr = p - v;
    const double rt = r * std::cos(w * t) + vr / w * std::sin(w * t);
    const double vrt = -r * w * std::sin(w * t) + vr * std::cos(w * t);
    const double c = cm + vcm * t;
    return {c + 0.5 * rt, vcm + 0.5 * vrt, c - 0.5 * rt, vcm - 0.5 * vrt};
  }
};

}  // namespace

TEST(MeanField, ZeroCouplingMatchesFullQcleAndVonNeumann) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 16), SpatialGrid(-6, 6, 16));
  const SpatialGrid qg(-6, 6, 12);
  const auto h = build_hamiltonian(g, qg, potentials::Zero{});
  const auto psi = WaveFunction::gaussian(qg, -0.5, 1.0, 0.5);
  const Smearing s{1.5, 1.5};
  const double t = 1.0;
  const auto cfg = config(0.01, t, 25);
  const auto mf = evolve_distribution_meanfield(MeanFieldState::pure(g, {0.5, 0.3}, psi, s), h, cfg);
  const auto full = propagate_state(uncorrelated_pure_state(g, {0.5, 0.3}, psi, s), GeneratorConfigRep(h), cfg,
                                    {mean_probe("q_c", observables::q_c(g, qg)), mean_probe("p_c", observables::p_c(g, qg)),
                                     mean_probe("q_q", observables::q_q(g, qg)), mean_probe("p_q", observables::p_q(h))});
  const auto rep = compare_with_full(full, mf);
  ASSERT_EQ(rep.names.size(), 4u);
  for (const auto& n : rep.names) EXPECT_LE(rep.max_discrepancy(n), 1e-8) << n;

  // quantum marginal against the exact von Neumann flow
  const Matrix u = (cplx(0.0, -t) * h.h_q()).exp();
  const Matrix rho = u * psi.projector_kernel() * u.adjoint();
  EXPECT_LE((mf.snapshots.back().rho - rho).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((mf.snapshots.back().classical.data() - marginal_classical(full.snapshots.back()).data()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(MeanField, NormalizationsConservedUnderCoupling) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 20), SpatialGrid(-6, 6, 20));
  const SpatialGrid qg(-6, 6, 16);
  const auto h = build_hamiltonian(g, qg, potentials::GaussianBump{1.0, 0.8});
  const auto rec = evolve_distribution_meanfield(
      MeanFieldState::pure(g, {-1.0, 0.8}, WaveFunction::gaussian(qg, 0.5, 1.0, 0.0), {1.5, 1.5}), h, config(0.01, 2.0, 20));
  for (double n : rec.column("normalization")) EXPECT_NEAR(n, 1.0, 1e-7);
  for (double n : rec.column("trace_rho")) EXPECT_NEAR(n, 1.0, 1e-7);
  for (double e : rec.column("rho_min_eig")) EXPECT_GE(e, -1e-8);
  EXPECT_LE(rec.max_symmetrization, 1e-10);
}

TEST(MeanField, GridMismatchRejected) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 8), SpatialGrid(-6, 6, 8));
  const auto h = build_hamiltonian(g, SpatialGrid(-6, 6, 8), potentials::Zero{});
  MeanFieldState s{ClassicalDistribution(g), Matrix::Zero(5, 5)};
  EXPECT_THROW(evolve_distribution_meanfield(s, h, config(0.01, 0.1)), GridError);
}

TEST(Ehrenfest, FreeMotion) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 8), SpatialGrid(-6, 6, 8));
  const SpatialGrid qg(-12, 12, 96);
  const auto h = build_hamiltonian(g, qg, potentials::Zero{});
  const auto psi = WaveFunction::gaussian(qg, -1.0, 1.0, 0.7);
  for (QuantumStep qs : {QuantumStep::SplitOperator, QuantumStep::CrankNicolson}) {
    const auto rec = ehrenfest_evolve({{0.3, 0.45}, psi}, h, config(0.01, 2.0, 10), {qs, 2});
    const auto& q = rec.column("q_c");
    const auto& x = rec.column("q_q");
    const auto& p = rec.column("p_q");
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      EXPECT_NEAR(q[i], 0.3 + 0.45 * rec.times[i], 1e-13);
      // the Cayley step evolves with (2/τ)·atan(Tτ/2) instead of T: O(dt²) drift in ⟨ξ⟩
      EXPECT_NEAR(x[i], x[0] + p[0] * rec.times[i], qs == QuantumStep::SplitOperator ? 1e-8 : 2e-5);
    }
    EXPECT_LE(rec.max_norm_drift, 1e-12);
  }
}

TEST(Ehrenfest, HarmonicFirstMomentsCloseAnalytically) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 8), SpatialGrid(-6, 6, 8));
  const SpatialGrid qg(-12, 12, 128);
  const double k = 1.0;
  const auto h = build_hamiltonian(g, qg, potentials::Harmonic{k}, 1.0, KineticScheme::Spectral);
  const auto psi = WaveFunction::gaussian(qg, 0.4, 1.0, -0.2);
  const auto rec = ehrenfest_evolve({{-0.5, 0.3}, psi}, h, config(0.01, 10.0, 10), {QuantumStep::SplitOperator, 4});
  const HarmonicMoments m{-0.5, 0.3, rec.column("q_q")[0], rec.column("p_q")[0], k};
  const char* names[] = {"q_c", "p_c", "q_q", "p_q"};
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const auto ref = m.at(rec.times[i]);
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(rec.column(names[c])[i], ref[c], 1e-6) << names[c] << " t=" << rec.times[i];
  }
}

TEST(Ehrenfest, EnergyAndNormOverTenPeriods) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 8), SpatialGrid(-6, 6, 8));
  const SpatialGrid qg(-12, 12, 96);
  const auto h = build_hamiltonian(g, qg, potentials::GaussianBump{1.0, 0.7});
  const auto psi = WaveFunction::gaussian(qg, 0.5, 1.0, 0.0);
  const double period = 2.0 * std::numbers::pi / std::sqrt(2.0);
  const double t = 0.01 * std::round(10.0 * period / 0.01);
  for (int order : {2, 4}) {
    const auto rec = ehrenfest_evolve({{-1.0, 0.6}, psi}, h, config(order == 2 ? 0.002 : 0.01, t, 50),
                                      {QuantumStep::SplitOperator, order});
    const auto& e = rec.column("energy");
    EXPECT_LE(max_diff(e, std::vector<double>(e.size(), e[0])), 1e-6 * std::abs(e[0])) << "order " << order;
    EXPECT_LE(rec.max_norm_drift, 1e-10);
  }
}

TEST(Ehrenfest, Validation) {
  const PhaseSpaceGrid g(SpatialGrid(-6, 6, 8), SpatialGrid(-6, 6, 8));
  const SpatialGrid bounded(-6, 6, 16, Boundary::Bounded);
  const auto h = build_hamiltonian(g, bounded, potentials::Zero{});
  const auto psi = WaveFunction::gaussian(bounded, 0.0, 1.0, 0.0);
  EXPECT_THROW(ehrenfest_evolve({{0, 0}, psi}, h, config(0.01, 0.1), {QuantumStep::SplitOperator, 2}), ConfigError);
  EXPECT_THROW(ehrenfest_evolve({{0, 0}, psi}, h, config(0.01, 0.1), {QuantumStep::CrankNicolson, 3}), ConfigError);
  EXPECT_NO_THROW(ehrenfest_evolve({{0, 0}, psi}, h, config(0.01, 0.1), {QuantumStep::CrankNicolson, 2}));
  std::vector<double> v(11, 0.0);
  const auto tab = build_hamiltonian(g, SpatialGrid(-1, 1, 8), potentials::Tabulated(-8.0, 8.0, v));
  const auto psi2 = WaveFunction::gaussian(SpatialGrid(-1, 1, 8), 0.0, 0.3, 0.0);
  EXPECT_THROW(ehrenfest_evolve({{0.0, 20.0}, psi2}, tab, config(0.1, 1.0)), RangeError);
}

TEST(Comparison, AlignmentChecked) {
  EvolutionRecord<int> a, b;
  a.times = {0.0, 0.1};
  b.times = {0.0, 0.2};
  EXPECT_THROW(compare_with_full(a, b), AlignmentError);
  b.times = {0.0};
  EXPECT_THROW(compare_with_full(a, b), AlignmentError);
}
