#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qcsim/meanfield.hpp"

namespace qcsim {

/// Heisenberg-picture canonical pairs under the product ansatz. Classical
/// variables start as c-numbers times the identity and become matrices once the
/// coupling mixes them with (Qq, Pq).
struct CanonicalOperatorState {
  Matrix qc, pc, qq, pq;
  double hbar = 1.0;

  static CanonicalOperatorState initial(ClassicalPhasePoint x, const KineticOperator& t) {
    const SpatialGrid& g = t.grid();
    const auto n = static_cast<Eigen::Index>(g.size());
    CanonicalOperatorState s;
    s.qc = x.q * Matrix::Identity(n, n);
    s.pc = x.p * Matrix::Identity(n, n);
    s.qq = observables::position_matrix(g);
    s.pq = t.momentum_matrix();
    s.hbar = t.hbar();
    return s;
  }
};

namespace detail {

inline Matrix comm(const Matrix& a, const Matrix& b) { return a * b - b * a; }

struct CanonicalForces {
  Matrix fc, fq;
};

/// Matrix forces for the polynomial couplings; anything else has no unambiguous
/// operator ordering and is refused.
inline CanonicalForces canonical_forces(const Potential& phi, const Matrix& qc, const Matrix& qq) {
  const auto& v = phi.variant();
  if (std::holds_alternative<potentials::Zero>(v)) return {Matrix::Zero(qc.rows(), qc.cols()), Matrix::Zero(qc.rows(), qc.cols())};
  if (const auto* h = std::get_if<potentials::Harmonic>(&v)) {
    const Matrix r = h->k * (qc - qq);
    return {-r, r};
  }
  if (const auto* b = std::get_if<potentials::Bilinear>(&v)) return {-b->c * qq, -b->c * qc};
  throw CapabilityError("canonical-operator solver supports Zero, Harmonic and Bilinear couplings only (got " +
                        std::string(phi.name()) + ")");
}

}  // namespace detail

/// Columns: ccr_quantum = max|[Qq,Pq] − C0|, ccr_total = max|[Qc,Pc] + [Qq,Pq] − C0|,
/// hermiticity = max defect over the four matrices; then any caller probes.
inline EvolutionRecord<CanonicalOperatorState> evolve_canonical_operators(
    CanonicalOperatorState s, const Potential& phi, const IntegratorConfig& cfg,
    const std::vector<Probe<CanonicalOperatorState>>& probes = {}) {
  cfg.validate();
  (void)detail::canonical_forces(phi, s.qc, s.qq);  // capability check before any work
  const Matrix c0 = detail::comm(s.qc, s.pc) + detail::comm(s.qq, s.pq);

  std::vector<Probe<CanonicalOperatorState>> all{
      {"ccr_quantum",
       [c0](const CanonicalOperatorState& x) { return (detail::comm(x.qq, x.pq) - c0).cwiseAbs().maxCoeff(); }},
      {"ccr_total",
       [c0](const CanonicalOperatorState& x) {
         return (detail::comm(x.qc, x.pc) + detail::comm(x.qq, x.pq) - c0).cwiseAbs().maxCoeff();
       }},
      {"hermiticity", [](const CanonicalOperatorState& x) {
         double d = 0.0;
         for (const Matrix* m : {&x.qc, &x.pc, &x.qq, &x.pq}) d = std::max(d, (*m - m->adjoint()).cwiseAbs().maxCoeff());
         return d;
       }}};
  all.insert(all.end(), probes.begin(), probes.end());

  EvolutionRecord<CanonicalOperatorState> rec;
  for (const auto& p : all) rec.names.push_back(p.name);
  rec.columns.resize(all.size());
  auto record = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t i = 0; i < all.size(); ++i) rec.columns[i].push_back(all[i].eval(s));
    if (cfg.keep_snapshots) rec.snapshots.push_back(s);
  };

  struct Deriv {
    Matrix qc, pc, qq, pq;
  };
  auto rhs = [&](const Matrix& qc, const Matrix& pc, const Matrix& qq, const Matrix& pq) {
    auto f = detail::canonical_forces(phi, qc, qq);
    return Deriv{pc, std::move(f.fc), pq, std::move(f.fq)};
  };

  record(0.0);
  const double h = cfg.dt;
  const std::size_t steps = cfg.steps();
  for (std::size_t step = 1; step <= steps; ++step) {
    const Deriv k1 = rhs(s.qc, s.pc, s.qq, s.pq);
    const Deriv k2 = rhs(s.qc + 0.5 * h * k1.qc, s.pc + 0.5 * h * k1.pc, s.qq + 0.5 * h * k1.qq, s.pq + 0.5 * h * k1.pq);
    const Deriv k3 = rhs(s.qc + 0.5 * h * k2.qc, s.pc + 0.5 * h * k2.pc, s.qq + 0.5 * h * k2.qq, s.pq + 0.5 * h * k2.pq);
    const Deriv k4 = rhs(s.qc + h * k3.qc, s.pc + h * k3.pc, s.qq + h * k3.qq, s.pq + h * k3.pq);
    s.qc += (h / 6.0) * (k1.qc + 2.0 * k2.qc + 2.0 * k3.qc + k4.qc);
    s.pc += (h / 6.0) * (k1.pc + 2.0 * k2.pc + 2.0 * k3.pc + k4.pc);
    s.qq += (h / 6.0) * (k1.qq + 2.0 * k2.qq + 2.0 * k3.qq + k4.qq);
    s.pq += (h / 6.0) * (k1.pq + 2.0 * k2.pq + 2.0 * k3.pq + k4.pq);
    if (step % cfg.stride == 0 || step == steps) record(static_cast<double>(step) * h);
  }
  if (!cfg.keep_snapshots) rec.snapshots.push_back(s);
  return rec;
}

/// ⟨Ψ0|M|Ψ0⟩·dξ probes for the four canonical matrices (q_c, p_c, q_q, p_q).
inline std::vector<Probe<CanonicalOperatorState>> canonical_probes(const WaveFunction& psi0) {
  const Vector v = psi0.amplitudes();
  const double dx = psi0.grid().spacing();
  auto ex = [v, dx](const Matrix& m) { return (v.adjoint() * m * v)(0).real() * dx; };
  return {{"q_c", [ex](const CanonicalOperatorState& s) { return ex(s.qc); }},
          {"p_c", [ex](const CanonicalOperatorState& s) { return ex(s.pc); }},
          {"q_q", [ex](const CanonicalOperatorState& s) { return ex(s.qq); }},
          {"p_q", [ex](const CanonicalOperatorState& s) { return ex(s.pq); }}};
}

// ---------------------------------------------------------------------------
// Wigner-symbol characteristics: classical two-body trajectories seeded on the
// support of the initial Wigner function.

using PhasePoint4 = std::array<double, 4>;  // (q1, p1, q2, p2)

struct SymbolObservable {
  std::string name;
  std::function<double(const PhasePoint4&)> a;
};

struct SymbolOptions {
  double support_threshold = 1e-12;  // relative to max |D0|
  std::size_t min_trajectories = 1;
  bool keep_history = false;
  int order = 2;  // 2: velocity Verlet; 4: triple-jump composition of Verlet steps
};

struct SymbolTrajectorySet {
  std::vector<double> weights;        // w₄·D0(node); divide by 2πħ for means
  std::vector<PhasePoint4> initial;
  std::vector<PhasePoint4> current;
  double hbar = 1.0;
  double discarded_mass = 0.0;        // (2πħ)^{-1}·Σ w₄·|D0| over skipped nodes
  double max_energy_drift = 0.0;      // max over trajectories of |ΔE|/max(|E0|, 1)
  std::vector<double> history_times;
  std::vector<std::vector<PhasePoint4>> history;
  EvolutionRecord<int> means;         // one column per SymbolObservable, plus "weight_sum"

  std::size_t size() const { return initial.size(); }
  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s / (2.0 * std::numbers::pi * hbar);
  }
};

namespace detail {

inline double symbol_energy(const Potential& phi, const PhasePoint4& z) {
  return 0.5 * (z[1] * z[1] + z[3] * z[3]) + phi(z[0], z[2]);
}

inline void verlet(const Potential& phi, PhasePoint4& z, double dt) {
  z[1] -= 0.5 * dt * phi.dq(z[0], z[2]);
  z[3] -= 0.5 * dt * phi.dxi(z[0], z[2]);
  z[0] += dt * z[1];
  z[2] += dt * z[3];
  z[1] -= 0.5 * dt * phi.dq(z[0], z[2]);
  z[3] -= 0.5 * dt * phi.dxi(z[0], z[2]);
}

inline double weighted_mean(const std::vector<double>& w, const std::vector<PhasePoint4>& z,
                            const std::function<double(const PhasePoint4&)>& a, double hbar) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a(z[i]);
  return s / (2.0 * std::numbers::pi * hbar);
}

}  // namespace detail

inline SymbolTrajectorySet seed_symbol_trajectories(const WignerField& d0, SymbolOptions opt = {}) {
  if (d0.role() != Role::State) throw RoleError("symbol trajectories are seeded from a State-role Wigner field");
  const auto& g = d0.classical();
  const auto& l = d0.lattice();
  const double cut = opt.support_threshold * d0.max_abs();
  SymbolTrajectorySet set;
  set.hbar = l.hbar();
  const double norm = 1.0 / (2.0 * std::numbers::pi * l.hbar());
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      const double w4 = g.weight(iq, ip) * l.weight();
      for (std::size_t c = 0; c < l.lines(); ++c)
        for (std::size_t k = 0; k < l.momenta(); ++k) {
          const double v = d0(x, c, k).real();
          if (std::abs(d0(x, c, k)) <= cut) {
            set.discarded_mass += norm * w4 * std::abs(v);
            continue;
          }
          set.weights.push_back(w4 * v);
          set.initial.push_back({g.q().point(iq), g.p().point(ip), l.q(c), l.p(k)});
        }
    }
  if (set.size() < opt.min_trajectories)
    throw ConfigError("only " + std::to_string(set.size()) + " trajectories above the support threshold");
  set.current = set.initial;
  return set;
}

/// Velocity-Verlet characteristics of the two-body Hamiltonian p₁²/2 + p₂²/2 + φ(q₁, q₂).
inline SymbolTrajectorySet evolve_wigner_symbols(const WignerField& d0, const Potential& phi, const IntegratorConfig& cfg,
                                                 const std::vector<SymbolObservable>& observables = {},
                                                 SymbolOptions opt = {}) {
  cfg.validate();
  if (opt.order != 2 && opt.order != 4) throw ConfigError("symbol trajectory order must be 2 or 4");
  SymbolTrajectorySet set = seed_symbol_trajectories(d0, opt);
  auto& rec = set.means;
  for (const auto& o : observables) rec.names.push_back(o.name);
  rec.names.push_back("weight_sum");
  rec.columns.resize(rec.names.size());
  auto record = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t i = 0; i < observables.size(); ++i)
      rec.columns[i].push_back(detail::weighted_mean(set.weights, set.current, observables[i].a, set.hbar));
    rec.columns.back().push_back(set.weight_sum());
    if (opt.keep_history) {
      set.history_times.push_back(t);
      set.history.push_back(set.current);
    }
  };

  std::vector<double> e0(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) e0[i] = detail::symbol_energy(phi, set.initial[i]);
  record(0.0);
  const std::size_t steps = cfg.steps();
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2), w0 = -cbrt2 / (2.0 - cbrt2);
  for (std::size_t step = 1; step <= steps; ++step) {
    for (auto& z : set.current) {
      if (opt.order == 2) {
        detail::verlet(phi, z, cfg.dt);
      } else {
        detail::verlet(phi, z, w1 * cfg.dt);
        detail::verlet(phi, z, w0 * cfg.dt);
        detail::verlet(phi, z, w1 * cfg.dt);
      }
    }
    if (step % cfg.stride == 0 || step == steps) {
      for (std::size_t i = 0; i < set.size(); ++i) {
        const double de = std::abs(detail::symbol_energy(phi, set.current[i]) - e0[i]) / std::max(std::abs(e0[i]), 1.0);
        set.max_energy_drift = std::max(set.max_energy_drift, de);
      }
      record(static_cast<double>(step) * cfg.dt);
    }
  }
  return set;
}

/// (2πħ)^{-1}·Σ w₄·D0·a(X(t)) against the frozen initial Wigner function.
inline double mean_from_symbols(const SymbolTrajectorySet& set, const WignerField& d0,
                                const std::function<double(const PhasePoint4&)>& a, double t) {
  if (std::abs(d0.hbar() - set.hbar) > 1e-15 * set.hbar) throw GridError("mean_from_symbols: hbar mismatch");
  if (t == 0.0) return detail::weighted_mean(set.weights, set.initial, a, set.hbar);
  for (std::size_t i = 0; i < set.history_times.size(); ++i)
    if (std::abs(set.history_times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
      return detail::weighted_mean(set.weights, set.history[i], a, set.hbar);
  throw RangeError("t = " + std::to_string(t) + " is not a recorded time of this trajectory set");
}

}  // namespace qcsim
