#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "test_util.hpp"

using namespace qcsim;
using qcsim::testing::random_hermitian;
using qcsim::testing::random_state;
using qcsim::testing::small_phase_grid;

namespace {

// Direct sum f·Σ_d K(i,j)·exp(−i p_k d dx/ħ) over every (i, j) with i + j = c.
cplx brute_symbol(const Matrix& k, const SpatialGrid& qg, double hbar, Role role, std::size_t c, std::size_t kk) {
  const auto n = static_cast<long>(qg.size());
  const double dx = qg.spacing();
  const double p = (static_cast<double>(kk) - static_cast<double>(n / 2)) * std::numbers::pi * hbar / (static_cast<double>(n) * dx);
  const double f = role == Role::State ? 2.0 * dx : 2.0;
  cplx s = 0.0;
  for (long i = 0; i < n; ++i) {
    const long j = static_cast<long>(c) - i;
    if (j < 0 || j >= n) continue;
    const double eta = static_cast<double>(i - j) * dx;
    s += k(i, j) * std::polar(1.0, -p * eta / hbar);
  }
  return f * s;
}

}  // namespace

TEST(Wigner, MatchesDirectSum) {
  std::mt19937_64 rng(11);
  const SpatialGrid qg(-3.0, 3.0, 7);
  for (Role role : {Role::State, Role::Observable}) {
    const auto a = random_hermitian(small_phase_grid(2, 2), qg, role, rng);
    const auto w = wigner_transform(a, 0.7);
    for (std::size_t c = 0; c < w.lattice().lines(); ++c)
      for (std::size_t k = 0; k < w.lattice().momenta(); ++k)
        EXPECT_LE(std::abs(w(3, c, k) - brute_symbol(a.at(3), qg, 0.7, role, c, k)), 1e-12);
  }
}

TEST(Wigner, RoundTripIsExact) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {6u, 7u, 16u}) {
    const SpatialGrid qg(-4.0, 4.0, n);
    for (Role role : {Role::State, Role::Observable}) {
      const auto a = random_hermitian(small_phase_grid(4, 3), qg, role, rng);
      const auto w = wigner_transform(a);
      EXPECT_LE(w.imaginary_residue(), 1e-10 * w.max_abs());
      const auto back = inverse_wigner_transform(w);
      EXPECT_LE((back.data() - a.data()).cwiseAbs().maxCoeff(), 1e-9 * a.max_abs());
    }
  }
}

TEST(Wigner, PairingMatchesOperatorTrace) {
  std::mt19937_64 rng(5);
  const SpatialGrid qg(-3.0, 3.0, 8);
  const auto g = small_phase_grid(5, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_hermitian(g, qg, Role::Observable, rng);
    const auto d = random_state(g, qg, rng);
    const double ref = mean_value(a, d);
    const double got = mean_value_wigner(wigner_transform(a, 1.3), wigner_transform(d, 1.3), 1.3);
    EXPECT_NEAR(got, ref, 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Wigner, IdentitySublatticeAverageIsOne) {
  const SpatialGrid qg(-3.0, 3.0, 8);
  const auto g = small_phase_grid(2, 2);
  const auto w = wigner_transform(observables::identity(g, qg));
  const auto& l = w.lattice();
  for (std::size_t c = 0; c + 1 < l.lines(); c += 2)
    for (std::size_t k = 0; k < l.momenta(); ++k)
      EXPECT_NEAR(0.5 * (w(0, c, k) + w(0, c + 1, k)).real(), 1.0, 1e-12);
}

TEST(Wigner, KineticSymbolApproachesFreeParticle) {
  // Pair average of the finite-difference Laplacian: (2ħ²/dx²)sin²(p dx/2ħ) = p²/2 + O(dx²).
  auto worst = [](std::size_t n) {
    const SpatialGrid qg(-8.0, 8.0, n);
    const auto g = small_phase_grid(2, 2);
    const auto h = build_hamiltonian(g, qg, potentials::Zero{});
    const auto w = wigner_transform(observables::quantum(g, qg, h.h_q()));
    const auto& l = w.lattice();
    double err = 0.0;
    for (std::size_t c = 0; c + 1 < l.lines(); c += 2) {
      if (c + 3 >= n && c <= n + 1) continue;  // the periodic seam lands on line n − 1
      for (std::size_t k = 0; k < l.momenta(); ++k) {
        if (std::abs(l.p(k)) > 1.0) continue;
        const double avg = 0.5 * (w(0, c, k) + w(0, c + 1, k)).real();
        err = std::max(err, std::abs(avg - 0.5 * l.p(k) * l.p(k)));
      }
    }
    return err;
  };
  const double e1 = worst(64), e2 = worst(128);
  EXPECT_GT(e1, 0.0);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
}

TEST(Wigner, GaussianIsPositiveAndNormalized) {
  // box must hold the ξ tail and window ±πħ/(2dx) the p tail; truncation of either
  // shows up as small negative ringing
  const SpatialGrid qg(-11.0, 11.0, 88);
  const auto g = small_phase_grid(6, 6);
  const auto psi = WaveFunction::gaussian(qg, 0.5, 1.0, 0.4);
  const auto w = wigner_of_pure_state(g, {0.0, 0.0}, psi, {2.0 * g.q().spacing(), 2.0 * g.p().spacing()}, 1.0);
  EXPECT_LE(w.imaginary_residue(), 1e-12 * w.max_abs());
  EXPECT_GE(w.data().real().minCoeff(), -1e-12 * w.max_abs());
  EXPECT_NEAR(mean_value_wigner(wigner_transform(observables::identity(g, qg)), w, 1.0), 1.0, 1e-6);
  EXPECT_NEAR(mean_value_wigner(wigner_transform(observables::q_q(g, qg)), w, 1.0), 0.5, 1e-6);
}

TEST(Wigner, PureStateAgreesWithGeneralTransform) {
  const SpatialGrid qg(-6.0, 6.0, 24);
  const auto g = small_phase_grid(8, 8);
  const auto psi = WaveFunction::gaussian(qg, -0.3, 0.9, 0.7);
  const Smearing s{2.0, 2.0};
  const auto w1 = wigner_of_pure_state(g, {0.2, -0.1}, psi, s, 1.0);
  const auto w2 = wigner_transform(uncorrelated_pure_state(g, {0.2, -0.1}, psi, s));
  EXPECT_LE((w1.data() - w2.data()).cwiseAbs().maxCoeff(), 1e-12 * w1.max_abs());
}

TEST(Wigner, OddStateIsNegativeAtOrigin) {
  // ψ ∝ ξ·exp(−ξ²/4σ²): ∫dη ψ(η/2)ψ*(−η/2) = −2 exactly in the continuum.
  const SpatialGrid qg(-10.0, 10.0, 64);
  Vector amp(64);
  for (std::size_t i = 0; i < 64; ++i) {
    const double x = qg.point(i);
    amp(static_cast<Eigen::Index>(i)) = x * std::exp(-x * x / 4.0);
  }
  const WaveFunction psi(qg, amp, true);
  const auto g = small_phase_grid(8, 8);
  const auto w = wigner_of_pure_state(g, {0.0, 0.0}, psi, {2.0, 2.0}, 1.0);
  const auto& l = w.lattice();
  const auto blob = smeared_delta(g, {0.0, 0.0}, {2.0, 2.0});
  const std::size_t x = g.index(4, 4);
  const auto quantum_only = [&](std::size_t c, std::size_t k) { return w(x, c, k).real() / blob.data()(static_cast<Eigen::Index>(x)); };
  ASSERT_NEAR(l.q(64), 0.0, 1e-12);
  ASSERT_NEAR(l.p(static_cast<std::size_t>(l.k_offset())), 0.0, 1e-12);
  EXPECT_NEAR(quantum_only(64, static_cast<std::size_t>(l.k_offset())), -2.0, 1e-6);
}

TEST(Wigner, BoundedGridRejected) {
  HybridDensityField a(small_phase_grid(2, 2), SpatialGrid(-1, 1, 5, Boundary::Bounded), Role::State);
  EXPECT_THROW(wigner_transform(a), UnsupportedError);
}
