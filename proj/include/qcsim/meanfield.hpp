#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qcsim/propagators.hpp"
#include "qcsim/states.hpp"

namespace qcsim {

/// Product-state ansatz: classical distribution and quantum density kernel
/// (Tr ρ·dξ = 1) evolved by their self-consistent Liouville / von Neumann pair.
struct MeanFieldState {
  ClassicalDistribution classical;
  Matrix rho;

  static MeanFieldState from_hybrid(const HybridDensityField& d) {
    return {marginal_classical(d), marginal_quantum(d)};
  }
  static MeanFieldState pure(const PhaseSpaceGrid& g, ClassicalPhasePoint x0, const WaveFunction& psi, Smearing s) {
    return {smeared_delta(g, x0, s), psi.projector_kernel()};
  }
};

/// Classical phase point plus wave function, Ψ normalized on the grid.
struct EhrenfestState {
  ClassicalPhasePoint x;
  WaveFunction psi;
};

namespace detail {

/// Σ_ij op_ij ρ_ji w_i: trace of an operator matrix against a state kernel.
inline double kernel_expectation(const Matrix& op, const Matrix& rho, const SpatialGrid& qg) {
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    s += op.row(i).transpose().cwiseProduct(rho.col(i)).sum() * qg.weight(static_cast<std::size_t>(i));
  return s.real();
}

/// V_eff(q) = Σ_i φ(q, ξ_i)·ρ_ii·w_i and its q-derivative, per classical row.
inline void effective_classical_potential(const HybridHamiltonian& h, const Matrix& rho, Eigen::VectorXd& v,
                                          Eigen::VectorXd& dv) {
  const auto& g = h.classical();
  const auto& qg = h.quantum();
  v.resize(static_cast<Eigen::Index>(g.q().size()));
  dv.resize(v.size());
  for (std::size_t iq = 0; iq < g.q().size(); ++iq) {
    const double q = g.q().point(iq);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < qg.size(); ++i) {
      const double w = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() * qg.weight(i);
      a += h.potential()(q, qg.point(i)) * w;
      b += h.potential().dq(q, qg.point(i)) * w;
    }
    v(static_cast<Eigen::Index>(iq)) = a;
    dv(static_cast<Eigen::Index>(iq)) = b;
  }
}

/// U(ξ_i) = Σ_X w·φ(q, ξ_i)·D(X).
inline Eigen::VectorXd effective_quantum_potential(const HybridHamiltonian& h, const ClassicalDistribution& d) {
  const auto& g = h.classical();
  const auto& qg = h.quantum();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(qg.size()));
  for (std::size_t iq = 0; iq < g.q().size(); ++iq) {
    double marginal = 0.0;
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) marginal += g.weight(iq, ip) * d(iq, ip);
    if (marginal == 0.0) continue;
    const double q = g.q().point(iq);
    for (std::size_t i = 0; i < qg.size(); ++i) u(static_cast<Eigen::Index>(i)) += marginal * h.potential()(q, qg.point(i));
  }
  return u;
}

struct MeanFieldRhs {
  Eigen::VectorXd dc;
  Matrix drho;
};

inline MeanFieldRhs meanfield_rhs(const HybridHamiltonian& h, const Eigen::VectorXd& dc, const Matrix& rho,
                                  DerivativeScheme dq_scheme, DerivativeScheme dp_scheme) {
  const auto& g = h.classical();
  Eigen::VectorXd v, dv;
  effective_classical_potential(h, rho, v, dv);
  const Vector c = dc.cast<cplx>();
  const Vector dq = classical_derivative(g, c, 1, Axis::Q, dq_scheme);
  const Vector dp = classical_derivative(g, c, 1, Axis::P, dp_scheme);
  MeanFieldRhs r;
  r.dc.resize(dc.size());
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const auto x = static_cast<Eigen::Index>(g.index(iq, ip));
      r.dc(x) = (-g.p().point(ip) * dq(x) + dv(static_cast<Eigen::Index>(iq)) * dp(x)).real();
    }
  const ClassicalDistribution cd(g, dc);
  const Eigen::VectorXd u = effective_quantum_potential(h, cd);
  Matrix comm = h.kinetic().commutator(rho);
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) comm(i, j) += (u(i) - u(j)) * rho(i, j);
  r.drho = cplx(0.0, -1.0 / h.hbar()) * comm;
  return r;
}

}  // namespace detail

inline double meanfield_energy(const HybridHamiltonian& h, const MeanFieldState& s) {
  const auto& g = h.classical();
  const double kin_c = s.classical.mean([](double, double p) { return 0.5 * p * p; });
  const double kin_q = detail::kernel_expectation(h.h_q(), s.rho, h.quantum());
  Eigen::VectorXd v, dv;
  detail::effective_classical_potential(h, s.rho, v, dv);
  double coupling = 0.0;
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) coupling += g.weight(iq, ip) * s.classical(iq, ip) * v(static_cast<Eigen::Index>(iq));
  return kin_c + kin_q + coupling;
}

/// Standard columns: q_c, p_c, q_q, p_q, energy, normalization, trace_rho, rho_min_eig.
inline std::vector<Probe<MeanFieldState>> meanfield_probes(const HybridHamiltonian& h) {
  const Matrix x = observables::position_matrix(h.quantum());
  const Matrix p = h.kinetic().momentum_matrix();
  const SpatialGrid qg = h.quantum();
  return {
      {"normalization", [](const MeanFieldState& s) { return s.classical.normalization(); }},
      {"trace_rho", [qg](const MeanFieldState& s) { return kernel_trace(s.rho, qg); }},
      {"rho_min_eig",
       [qg](const MeanFieldState& s) {
         Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s.rho + s.rho.adjoint()) * qg.spacing(), Eigen::EigenvaluesOnly);
         return es.eigenvalues().minCoeff();
       }},
      {"q_c", [](const MeanFieldState& s) { return s.classical.mean([](double q, double) { return q; }); }},
      {"p_c", [](const MeanFieldState& s) { return s.classical.mean([](double, double pp) { return pp; }); }},
      {"q_q", [x, qg](const MeanFieldState& s) { return detail::kernel_expectation(x, s.rho, qg); }},
      {"p_q", [p, qg](const MeanFieldState& s) { return detail::kernel_expectation(p, s.rho, qg); }},
      {"energy", [h](const MeanFieldState& s) { return meanfield_energy(h, s); }},
  };
}

/// Self-consistent pair ∂D/∂t = {H_c + V_eff, D}, iħ∂ρ/∂t = [h_q + U, ρ], coupled RK4
/// with both effective potentials rebuilt at every stage.
inline EvolutionRecord<MeanFieldState> evolve_distribution_meanfield(
    MeanFieldState s, const HybridHamiltonian& h, const IntegratorConfig& cfg,
    DerivativeScheme dq_scheme = DerivativeScheme::Central, DerivativeScheme dp_scheme = DerivativeScheme::Central) {
  cfg.validate();
  if (cfg.scheme != TimeScheme::RK4) throw UnsupportedError("mean-field solver supports RK4 only");
  require_same(h.classical(), s.classical.grid(), "evolve_distribution_meanfield");
  if (s.rho.rows() != static_cast<Eigen::Index>(h.quantum().size()) || s.rho.cols() != s.rho.rows())
    throw GridError("density kernel does not match the quantum grid");
  if (cfg.check_cfl) {
    const double limit = detail::stable_dt(h, cfg.safety);
    if (cfg.dt > limit)
      throw ConfigError("integrator.dt = " + std::to_string(cfg.dt) + " exceeds the stability limit " + std::to_string(limit));
  }

  EvolutionRecord<MeanFieldState> rec;
  const auto probes = meanfield_probes(h);
  for (const auto& p : probes) rec.names.push_back(p.name);
  rec.columns.resize(probes.size());
  auto record = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t i = 0; i < probes.size(); ++i) rec.columns[i].push_back(probes[i].eval(s));
    if (cfg.keep_snapshots) rec.snapshots.push_back(s);
  };

  const auto& g = h.classical();
  const double nc0 = s.classical.normalization();
  const double nq0 = kernel_trace(s.rho, h.quantum());
  record(0.0);
  const double dt = cfg.dt;
  const std::size_t steps = cfg.steps();
  for (std::size_t step = 1; step <= steps; ++step) {
    Eigen::VectorXd c = s.classical.data();
    const auto k1 = detail::meanfield_rhs(h, c, s.rho, dq_scheme, dp_scheme);
    const auto k2 = detail::meanfield_rhs(h, c + 0.5 * dt * k1.dc, s.rho + 0.5 * dt * k1.drho, dq_scheme, dp_scheme);
    const auto k3 = detail::meanfield_rhs(h, c + 0.5 * dt * k2.dc, s.rho + 0.5 * dt * k2.drho, dq_scheme, dp_scheme);
    const auto k4 = detail::meanfield_rhs(h, c + dt * k3.dc, s.rho + dt * k3.drho, dq_scheme, dp_scheme);
    c += (dt / 6.0) * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc);
    s.rho += (dt / 6.0) * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
    const Matrix herm = 0.5 * (s.rho + s.rho.adjoint());
    rec.max_symmetrization = std::max(rec.max_symmetrization, (herm - s.rho).cwiseAbs().maxCoeff() / std::max(s.rho.cwiseAbs().maxCoeff(), 1e-300));
    s.rho = herm;
    s.classical = ClassicalDistribution(g, c);

    const double nc = s.classical.normalization(), nq = kernel_trace(s.rho, h.quantum());
    const double drift = std::max(std::abs(nc - nc0), std::abs(nq - nq0));
    rec.max_norm_drift = std::max(rec.max_norm_drift, drift);
    if (!std::isfinite(drift) || drift > cfg.norm_tolerance)
      throw NumericalError("mean-field normalization drift " + std::to_string(drift) + " at t = " +
                           std::to_string(static_cast<double>(step) * dt));
    if (cfg.rescale_norm) {
      s.classical = ClassicalDistribution(g, c * (nc0 / nc));
      s.rho *= nq0 / nq;
    }
    if (step % cfg.stride == 0 || step == steps) record(static_cast<double>(step) * dt);
  }
  if (!cfg.keep_snapshots) rec.snapshots.push_back(s);
  return rec;
}

// ---------------------------------------------------------------------------
// Ehrenfest (Hamilton–Schrödinger) trajectories.

enum class QuantumStep { CrankNicolson, SplitOperator };

inline const char* to_string(QuantumStep q) { return q == QuantumStep::SplitOperator ? "split-operator" : "crank-nicolson"; }

struct EhrenfestOptions {
  QuantumStep quantum = QuantumStep::CrankNicolson;
  int order = 2;  // 2: Strang; 4: triple-jump composition of Strang steps
};

namespace detail {

/// exp(−i T τ/ħ) applied to a vector, by FFT (periodic) or Cayley transform (any grid).
class KineticPropagator {
 public:
  KineticPropagator(const KineticOperator& t, QuantumStep mode) : t_(t), mode_(mode) {
    if (mode_ == QuantumStep::SplitOperator) energies_ = t.circulant_energies();
  }

  void apply(Vector& psi, double tau) {
    if (mode_ == QuantumStep::SplitOperator) {
      Dft dft(static_cast<std::size_t>(psi.size()));
      std::vector<cplx> buf(psi.data(), psi.data() + psi.size());
      dft.forward(buf);
      for (std::size_t k = 0; k < buf.size(); ++k)
        buf[k] *= std::polar(1.0, -energies_(static_cast<Eigen::Index>(k)) * tau / t_.hbar());
      dft.inverse(buf);
      for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = buf[static_cast<std::size_t>(i)];
      return;
    }
    auto it = cache_.begin();
    for (; it != cache_.end(); ++it)
      if (it->tau == tau) break;
    if (it == cache_.end()) {
      const auto n = t_.matrix().rows();
      const Matrix a = Matrix::Identity(n, n) + cplx(0.0, 0.5 * tau / t_.hbar()) * t_.matrix();
      const Matrix b = Matrix::Identity(n, n) - cplx(0.0, 0.5 * tau / t_.hbar()) * t_.matrix();
      cache_.push_back({tau, Eigen::PartialPivLU<Matrix>(a), b});
      it = std::prev(cache_.end());
    }
    psi = it->lu.solve(it->rhs * psi);
  }

 private:
  struct Cayley {
    double tau;
    Eigen::PartialPivLU<Matrix> lu;
    Matrix rhs;
  };
  const KineticOperator& t_;
  QuantumStep mode_;
  Eigen::VectorXd energies_;
  std::vector<Cayley> cache_;
};

/// Mean force −Σ φ_q(Q, ξ_i)|Ψ_i|² w_i.
inline double ehrenfest_force(const HybridHamiltonian& h, double q, const Vector& psi) {
  const auto& qg = h.quantum();
  double f = 0.0;
  for (std::size_t i = 0; i < qg.size(); ++i)
    f -= h.potential().dq(q, qg.point(i)) * std::norm(psi(static_cast<Eigen::Index>(i))) * qg.weight(i);
  return f;
}

/// One Strang step of size τ: half kick + potential phase, drift + kinetic, half kick + phase.
inline void strang_step(const HybridHamiltonian& h, KineticPropagator& kin, EhrenfestState& s, double tau) {
  const auto& qg = h.quantum();
  auto& psi = s.psi.amplitudes();
  auto kick = [&](double half) {
    s.x.p += half * ehrenfest_force(h, s.x.q, psi);
    for (std::size_t i = 0; i < qg.size(); ++i)
      psi(static_cast<Eigen::Index>(i)) *= std::polar(1.0, -h.potential()(s.x.q, qg.point(i)) * half / h.hbar());
  };
  kick(0.5 * tau);
  s.x.q += tau * s.x.p;
  kin.apply(psi, tau);
  kick(0.5 * tau);
}

}  // namespace detail

inline double ehrenfest_energy(const HybridHamiltonian& h, const EhrenfestState& s) {
  const auto& psi = s.psi.amplitudes();
  const auto& qg = h.quantum();
  const Vector tpsi = h.h_q() * psi;
  double e = 0.5 * s.x.p * s.x.p;
  for (std::size_t i = 0; i < qg.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    e += (std::conj(psi(ii)) * tpsi(ii)).real() * qg.weight(i);
    e += h.potential()(s.x.q, qg.point(i)) * std::norm(psi(ii)) * qg.weight(i);
  }
  return e;
}

/// Standard columns: q_c, p_c, q_q, p_q, energy, norm.
inline std::vector<Probe<EhrenfestState>> ehrenfest_probes(const HybridHamiltonian& h) {
  const Matrix x = observables::position_matrix(h.quantum());
  const Matrix p = h.kinetic().momentum_matrix();
  const SpatialGrid qg = h.quantum();
  auto expect = [qg](const Matrix& op, const Vector& psi) {
    return (psi.adjoint() * op * psi)(0).real() * qg.spacing();
  };
  return {
      {"q_c", [](const EhrenfestState& s) { return s.x.q; }},
      {"p_c", [](const EhrenfestState& s) { return s.x.p; }},
      {"q_q", [x, expect](const EhrenfestState& s) { return expect(x, s.psi.amplitudes()); }},
      {"p_q", [p, expect](const EhrenfestState& s) { return expect(p, s.psi.amplitudes()); }},
      {"energy", [h](const EhrenfestState& s) { return ehrenfest_energy(h, s); }},
      {"norm", [](const EhrenfestState& s) { return s.psi.norm(); }},
  };
}

/// Newton–Schrödinger pair integrated by Strang splitting (velocity Verlet for the
/// classical half, exact unitary sub-steps for Ψ).
inline EvolutionRecord<EhrenfestState> ehrenfest_evolve(EhrenfestState s, const HybridHamiltonian& h,
                                                        const IntegratorConfig& cfg, EhrenfestOptions opt = {}) {
  cfg.validate();
  require_same(h.quantum(), s.psi.grid(), "ehrenfest_evolve");
  if (opt.order != 2 && opt.order != 4) throw ConfigError("ehrenfest order must be 2 or 4");
  if (opt.quantum == QuantumStep::SplitOperator && !h.quantum().periodic())
    throw ConfigError("split-operator quantum step requires a periodic quantum grid");
  if (std::abs(s.psi.norm() - 1.0) > 1e-10) throw NumericalError("initial wave function is not normalized");

  detail::KineticPropagator kin(h.kinetic(), opt.quantum);
  EvolutionRecord<EhrenfestState> rec;
  const auto probes = ehrenfest_probes(h);
  for (const auto& p : probes) rec.names.push_back(p.name);
  rec.columns.resize(probes.size());
  auto record = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t i = 0; i < probes.size(); ++i) rec.columns[i].push_back(probes[i].eval(s));
    if (cfg.keep_snapshots) rec.snapshots.push_back(s);
  };

  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2), w0 = -cbrt2 / (2.0 - cbrt2);
  record(0.0);
  const std::size_t steps = cfg.steps();
  for (std::size_t step = 1; step <= steps; ++step) {
    if (opt.order == 2) {
      detail::strang_step(h, kin, s, cfg.dt);
    } else {
      detail::strang_step(h, kin, s, w1 * cfg.dt);
      detail::strang_step(h, kin, s, w0 * cfg.dt);
      detail::strang_step(h, kin, s, w1 * cfg.dt);
    }
    const double drift = std::abs(s.psi.norm() - 1.0);
    rec.max_norm_drift = std::max(rec.max_norm_drift, drift);
    if (!std::isfinite(s.x.q) || !std::isfinite(drift) || drift > cfg.norm_tolerance)
      throw NumericalError("Ehrenfest wave function norm drifted by " + std::to_string(drift));
    if (step % cfg.stride == 0 || step == steps) record(static_cast<double>(step) * cfg.dt);
  }
  if (!cfg.keep_snapshots) rec.snapshots.push_back(s);
  return rec;
}

// ---------------------------------------------------------------------------
// Full-vs-reduced comparison.

struct ComparisonReport {
  std::vector<double> times;
  std::vector<std::string> names;                  // observables compared
  std::vector<std::vector<double>> discrepancy;    // |⟨A⟩_full − ⟨A⟩_reduced|
  std::vector<double> correlation_norm;            // from the full run, empty if not recorded
  std::string note =
      "finite two-body system: the product ansatz neglects correlations and is not a mean-field limit";

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return discrepancy[i];
    throw ConfigError("no discrepancy column named '" + name + "'");
  }
  double max_discrepancy(const std::string& name) const {
    double m = 0.0;
    for (double v : column(name)) m = std::max(m, v);
    return m;
  }
};

/// Matches rows by time (exactly aligned grids required) and columns by name.
template <class FullField, class Reduced>
ComparisonReport compare_with_full(const EvolutionRecord<FullField>& full, const EvolutionRecord<Reduced>& reduced,
                                   const std::vector<std::string>& names = {"q_c", "p_c", "q_q", "p_q"}) {
  if (full.times.size() != reduced.times.size()) throw AlignmentError("records have different numbers of rows");
  for (std::size_t i = 0; i < full.times.size(); ++i)
    if (std::abs(full.times[i] - reduced.times[i]) > 1e-12 * std::max(1.0, std::abs(full.times[i])))
      throw AlignmentError("records are sampled at different times");
  ComparisonReport r;
  r.times = full.times;
  for (const auto& n : names) {
    if (!full.has(n) || !reduced.has(n)) continue;
    const auto& a = full.column(n);
    const auto& b = reduced.column(n);
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    r.names.push_back(n);
    r.discrepancy.push_back(std::move(d));
  }
  if (full.has("correlation_norm")) r.correlation_norm = full.column("correlation_norm");
  return r;
}

}  // namespace qcsim
