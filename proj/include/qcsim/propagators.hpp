#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qcsim/dense.hpp"
#include "qcsim/observables.hpp"
#include "qcsim/wigner.hpp"

namespace qcsim {

enum class TimeScheme { RK4, ExactDense };

inline const char* to_string(TimeScheme s) { return s == TimeScheme::ExactDense ? "ExactDense" : "RK4"; }

struct IntegratorConfig {
  double dt = 0.01;
  double t_final = 1.0;
  TimeScheme scheme = TimeScheme::RK4;
  std::size_t stride = 1;       // steps per recorded row
  double safety = 0.5;          // CFL safety factor
  bool check_cfl = true;
  bool rescale_norm = false;    // opt-in: renormalize states after each step
  bool keep_snapshots = false;
  double norm_tolerance = 1e-4; // hard failure beyond this drift

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrator.dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("integrator.t_final must be non-negative");
    if (stride == 0) throw ConfigError("integrator.stride must be at least 1");
    if (!(safety > 0.0)) throw ConfigError("integrator.safety must be positive");
    const double k = t_final / dt;
    if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k))
      throw ConfigError("integrator.t_final must be a whole number of steps dt");
  }
  std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_final / dt)); }
  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

template <class Field>
struct Probe {
  std::string name;
  std::function<double(const Field&)> eval;
};

/// Times plus one column per probe; snapshots when requested.
template <class Field>
struct EvolutionRecord {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<Field> snapshots;
  double max_symmetrization = 0.0;  // largest per-step Hermitian correction, relative to max|D|
  double max_norm_drift = 0.0;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return columns[i];
    throw ConfigError("no column named '" + name + "'");
  }
  bool has(const std::string& name) const {
    for (const auto& n : names)
      if (n == name) return true;
    return false;
  }
};

// Per-representation hooks.
inline HybridDensityField apply_generator(const GeneratorConfigRep& g, const HybridDensityField& a) {
  return apply_generator_config(g, a);
}
inline WignerField apply_generator(const GeneratorWignerRep& g, const WignerField& a) {
  return apply_generator_wigner(g, a);
}

namespace detail {

inline double resymmetrize(HybridDensityField& d) { return d.symmetrize(); }
inline double resymmetrize(WignerField& w) { return w.make_real(); }
inline double normalization_of(const HybridDensityField& d) { return d.normalization(); }
inline double normalization_of(const WignerField& w) { return wigner_normalization(w); }

template <class Gen>
void check_cfl(const Gen& gen, const IntegratorConfig& cfg) {
  if (!cfg.check_cfl || cfg.scheme == TimeScheme::ExactDense) return;
  const double limit = gen.max_stable_dt(cfg.safety);
  if (cfg.dt > limit)
    throw ConfigError("integrator.dt = " + std::to_string(cfg.dt) + " exceeds the stability limit " +
                      std::to_string(limit) + " (safety " + std::to_string(cfg.safety) + ")");
}

/// Shared driver: sign = +1 for the Heisenberg equation, −1 for the Liouville equation.
template <class Field, class Gen>
EvolutionRecord<Field> propagate(Field f, const Gen& gen, const IntegratorConfig& cfg, int sign,
                                 const std::vector<Probe<Field>>& probes, bool is_state) {
  cfg.validate();
  check_cfl(gen, cfg);
  EvolutionRecord<Field> rec;
  for (const auto& p : probes) rec.names.push_back(p.name);
  rec.columns.resize(probes.size());

  const double n0 = is_state ? normalization_of(f) : 0.0;
  auto record = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t i = 0; i < probes.size(); ++i) rec.columns[i].push_back(probes[i].eval(f));
    if (cfg.keep_snapshots) rec.snapshots.push_back(f);
  };

  Matrix prop;
  if (cfg.scheme == TimeScheme::ExactDense) prop = checked_dense_exponential(assemble_dense_generator(gen), cfg.dt, sign);

  const double s = static_cast<double>(sign);
  record(0.0);
  const std::size_t steps = cfg.steps();
  for (std::size_t step = 1; step <= steps; ++step) {
    if (cfg.scheme == TimeScheme::ExactDense) {
      f.data() = prop * f.data();
    } else {
      const double h = cfg.dt;
      const Field k1 = apply_generator(gen, f);
      const Field k2 = apply_generator(gen, f + cplx(0.5 * h * s) * k1);
      const Field k3 = apply_generator(gen, f + cplx(0.5 * h * s) * k2);
      const Field k4 = apply_generator(gen, f + cplx(h * s) * k3);
      f.data() += (h * s / 6.0) * (k1.data() + 2.0 * k2.data() + 2.0 * k3.data() + k4.data());
    }
    if (is_state) {
      const double scale = std::max(f.max_abs(), 1e-300);
      rec.max_symmetrization = std::max(rec.max_symmetrization, resymmetrize(f) / scale);
      const double nn = normalization_of(f);
      const double drift = std::abs(nn - n0);
      rec.max_norm_drift = std::max(rec.max_norm_drift, drift);
      if (!std::isfinite(nn) || drift > cfg.norm_tolerance)
        throw NumericalError("normalization drifted from " + std::to_string(n0) + " to " + std::to_string(nn) +
                             " at t = " + std::to_string(static_cast<double>(step) * cfg.dt) +
                             " (tolerance " + std::to_string(cfg.norm_tolerance) + ")");
      if (cfg.rescale_norm) f *= cplx(n0 / nn);
    }
    if (step % cfg.stride == 0 || step == steps) record(static_cast<double>(step) * cfg.dt);
  }
  if (!cfg.keep_snapshots) rec.snapshots.push_back(f);  // the final field is always kept
  return rec;
}

}  // namespace detail

/// ∂A/∂t = 𝓛A.
template <class Field, class Gen>
EvolutionRecord<Field> propagate_observable(const Field& a0, const Gen& gen, const IntegratorConfig& cfg,
                                            const std::vector<Probe<Field>>& probes = {}) {
  if (a0.role() != Role::Observable) throw RoleError("propagate_observable needs an Observable-role field");
  return detail::propagate(a0, gen, cfg, +1, probes, false);
}

/// ∂D/∂t = −𝓛D, re-symmetrized every step; "normalization" is always the first column.
template <class Field, class Gen>
EvolutionRecord<Field> propagate_state(const Field& d0, const Gen& gen, const IntegratorConfig& cfg,
                                       const std::vector<Probe<Field>>& probes = {}) {
  if (d0.role() != Role::State) throw RoleError("propagate_state needs a State-role field");
  std::vector<Probe<Field>> all{{"normalization", [](const Field& f) { return detail::normalization_of(f); }}};
  all.insert(all.end(), probes.begin(), probes.end());
  return detail::propagate(d0, gen, cfg, -1, all, true);
}

// Common probes.

inline Probe<HybridDensityField> mean_probe(std::string name, HybridDensityField a) {
  return {std::move(name), [a = std::move(a)](const HybridDensityField& d) { return mean_value(a, d); }};
}
inline Probe<WignerField> mean_probe(std::string name, WignerField a) {
  return {std::move(name), [a = std::move(a)](const WignerField& d) { return mean_value_wigner(a, d, d.hbar()); }};
}
inline Probe<HybridDensityField> energy_probe(const HybridHamiltonian& h) {
  return mean_probe("energy", h.as_observable());
}
inline Probe<WignerField> energy_probe_wigner(const HybridHamiltonian& h) {
  return mean_probe("energy", wigner_transform(h.as_observable(), h.hbar()));
}
inline Probe<HybridDensityField> correlation_probe() {
  return {"correlation_norm", [](const HybridDensityField& d) { return correlation_norm(d); }};
}
/// ⟨A(t), D0⟩ for Heisenberg-picture runs.
inline Probe<HybridDensityField> dual_probe(std::string name, HybridDensityField d0) {
  return {std::move(name), [d = std::move(d0)](const HybridDensityField& a) { return mean_value(a, d); }};
}
inline Probe<WignerField> dual_probe(std::string name, WignerField d0) {
  return {std::move(name), [d = std::move(d0)](const WignerField& a) { return mean_value_wigner(a, d, d.hbar()); }};
}

}  // namespace qcsim
