#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "qcsim/heisenberg.hpp"
#include "qcsim/io/scenario.hpp"
#include "qcsim/io/snapshot.hpp"
#include "qcsim/io/table.hpp"

namespace qcsim::io {

using FinalState = std::variant<std::monostate, HybridDensityField, WignerField, MeanFieldSnapshot, EhrenfestState>;

struct RunResult {
  TimeSeriesTable table;
  FinalState final_state;
};

inline std::string unit_of(const std::string& column) {
  if (column == "q_c" || column == "q_q") return "length";
  if (column == "p_c" || column == "p_q") return "momentum";
  if (column == "H") return "energy";
  return "1";
}

namespace detail {

inline WaveFunction initial_wave_function(const Scenario& s) {
  const SpatialGrid g = s.quantum_grid();
  if (s.psi == PsiFamily::Gaussian) return WaveFunction::gaussian(g, s.psi_center, s.psi_width, s.psi_momentum, s.hbar);
  WaveFunction psi;
  try {
    psi = load_wave_function(s.psi_file);
  } catch (const Error& e) {
    throw ValidationError("initial.file", e.what());
  }
  if (!(psi.grid() == g)) throw ValidationError("initial.file", "snapshot grid differs from the scenario's quantum grid");
  return psi;
}

inline HybridHamiltonian hamiltonian_of(const Scenario& s) {
  return build_hamiltonian(s.classical_grid(), s.quantum_grid(), s.potential, s.hbar, s.kinetic);
}

/// Column names as the table will carry them; solver records may name things
/// differently ("energy" vs "H", "normalization" vs "norm").
template <class Rec>
TimeSeriesTable table_from_record(const Scenario& s, const Rec& rec,
                                  const std::map<std::string, std::string>& rename = {}) {
  TimeSeriesTable tab;
  tab.columns = s.observables;
  for (const auto& c : tab.columns) tab.units.push_back(unit_of(c));
  std::vector<const std::vector<double>*> src;
  for (const auto& c : tab.columns) {
    auto it = rename.find(c);
    const std::string name = it == rename.end() ? c : it->second;
    src.push_back(&rec.column(name));
  }
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    std::vector<double> row(src.size());
    for (std::size_t j = 0; j < src.size(); ++j) row[j] = (*src[j])[i];
    tab.add_row(rec.times[i], std::move(row));
  }
  return tab;
}

inline RunResult run_config(const Scenario& s) {
  const auto h = hamiltonian_of(s);
  const GeneratorConfigRep gen(h, s.dq, s.dp);
  const auto psi = initial_wave_function(s);
  const auto d0 = uncorrelated_pure_state(h.classical(), s.x0, psi, s.smearing());
  IntegratorConfig cfg = s.integrator;
  if (s.method == Method::OracleDense) cfg.scheme = TimeScheme::ExactDense;
  const auto& g = h.classical();
  const auto& qg = h.quantum();
  std::vector<Probe<HybridDensityField>> probes;
  for (const auto& o : s.observables) {
    if (o == "q_c") probes.push_back(mean_probe(o, observables::q_c(g, qg)));
    else if (o == "p_c") probes.push_back(mean_probe(o, observables::p_c(g, qg)));
    else if (o == "q_q") probes.push_back(mean_probe(o, observables::q_q(g, qg)));
    else if (o == "p_q") probes.push_back(mean_probe(o, observables::p_q(h)));
    else if (o == "H") probes.push_back(mean_probe(o, h.as_observable()));
    else if (o == "correlation_norm") probes.push_back(correlation_probe());
  }
  auto rec = propagate_state(d0, gen, cfg, probes);
  RunResult r{table_from_record(s, rec, {{"norm", "normalization"}}), {}};
  r.final_state = std::move(rec.snapshots.back());
  return r;
}

inline RunResult run_wigner(const Scenario& s) {
  const auto h = hamiltonian_of(s);
  const GeneratorWignerRep gen(h, s.force_term, s.dq, s.dp);
  const auto psi = initial_wave_function(s);
  const auto d0 = wigner_of_pure_state(h.classical(), s.x0, psi, s.smearing(), s.hbar);
  const auto& g = h.classical();
  const auto& qg = h.quantum();
  std::vector<Probe<WignerField>> probes;
  for (const auto& o : s.observables) {
    if (o == "q_c") probes.push_back(mean_probe(o, wigner_transform(observables::q_c(g, qg), s.hbar)));
    else if (o == "p_c") probes.push_back(mean_probe(o, wigner_transform(observables::p_c(g, qg), s.hbar)));
    else if (o == "q_q") probes.push_back(mean_probe(o, wigner_transform(observables::q_q(g, qg), s.hbar)));
    else if (o == "p_q") probes.push_back(mean_probe(o, wigner_transform(observables::p_q(h), s.hbar)));
    else if (o == "H") probes.push_back(mean_probe(o, wigner_transform(h.as_observable(), s.hbar)));
    else if (o == "correlation_norm")
      probes.push_back({o, [](const WignerField& w) { return correlation_norm(inverse_wigner_transform(w)); }});
  }
  auto rec = propagate_state(d0, gen, s.integrator, probes);
  RunResult r{table_from_record(s, rec, {{"norm", "normalization"}}), {}};
  r.final_state = std::move(rec.snapshots.back());
  return r;
}

inline RunResult run_meanfield(const Scenario& s) {
  const auto h = hamiltonian_of(s);
  const auto psi = initial_wave_function(s);
  auto rec = evolve_distribution_meanfield(MeanFieldState::pure(h.classical(), s.x0, psi, s.smearing()), h,
                                           s.integrator, s.dq, s.dp);
  RunResult r{table_from_record(s, rec, {{"H", "energy"}, {"norm", "normalization"}}), {}};
  r.final_state = MeanFieldSnapshot{std::move(rec.snapshots.back()), h.quantum()};
  return r;
}

inline RunResult run_ehrenfest(const Scenario& s) {
  const auto h = hamiltonian_of(s);
  auto rec = ehrenfest_evolve({s.x0, initial_wave_function(s)}, h, s.integrator, {s.quantum_step, s.order});
  RunResult r{table_from_record(s, rec, {{"H", "energy"}}), {}};
  r.final_state = std::move(rec.snapshots.back());
  return r;
}

inline RunResult run_symbols(const Scenario& s) {
  const auto g = s.classical_grid();
  const auto d0 = wigner_of_pure_state(g, s.x0, initial_wave_function(s), s.smearing(), s.hbar);
  const Potential phi = s.potential;
  std::vector<SymbolObservable> obs;
  for (const auto& o : s.observables) {
    if (o == "q_c") obs.push_back({o, [](const PhasePoint4& z) { return z[0]; }});
    else if (o == "p_c") obs.push_back({o, [](const PhasePoint4& z) { return z[1]; }});
    else if (o == "q_q") obs.push_back({o, [](const PhasePoint4& z) { return z[2]; }});
    else if (o == "p_q") obs.push_back({o, [](const PhasePoint4& z) { return z[3]; }});
    else if (o == "H") obs.push_back({o, [phi](const PhasePoint4& z) { return qcsim::detail::symbol_energy(phi, z); }});
  }
  SymbolOptions opt;
  opt.support_threshold = s.support_threshold;
  opt.min_trajectories = s.min_trajectories;
  opt.order = s.order;
  const auto set = evolve_wigner_symbols(d0, phi, s.integrator, obs, opt);
  return {table_from_record(s, set.means, {{"norm", "weight_sum"}}), {}};
}

/// Re-raises the active library error with a prefix, keeping its type.
[[noreturn]] inline void rethrow_with_context(const std::string& ctx) {
  try {
    throw;
  } catch (const GridError& e) { throw GridError(ctx + e.what());
  } catch (const RoleError& e) { throw RoleError(ctx + e.what());
  } catch (const RangeError& e) { throw RangeError(ctx + e.what());
  } catch (const ResolutionError& e) { throw ResolutionError(ctx + e.what());
  } catch (const ConfigError& e) { throw ConfigError(ctx + e.what());
  } catch (const NumericalError& e) { throw NumericalError(ctx + e.what());
  } catch (const SizeError& e) { throw SizeError(ctx + e.what());
  } catch (const CapabilityError& e) { throw CapabilityError(ctx + e.what());
  } catch (const UnsupportedError& e) { throw UnsupportedError(ctx + e.what());
  } catch (const AlignmentError& e) { throw AlignmentError(ctx + e.what());
  } catch (const FormatError& e) { throw FormatError(ctx + e.what());
  } catch (const Error& e) { throw Error(ctx + e.what());
  }
}

}  // namespace detail

/// Validates, dispatches on the method, and attaches the metadata block.
/// Solver errors are rethrown with the scenario hash and method attached.
inline RunResult run(const Scenario& s) {
  validate(s);
  RunResult r;
  try {
    switch (s.method) {
      case Method::FullQCLEConfig:
      case Method::OracleDense: r = detail::run_config(s); break;
      case Method::FullQCLEWigner: r = detail::run_wigner(s); break;
      case Method::MeanFieldDistribution: r = detail::run_meanfield(s); break;
      case Method::Ehrenfest: r = detail::run_ehrenfest(s); break;
      case Method::HeisenbergSymbols: r = detail::run_symbols(s); break;
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error&) {
    detail::rethrow_with_context("run " + to_string(s.method) + " (scenario " + scenario_hash(s) + "): ");
  }
  r.table.meta = {{"method", to_string(s.method)},
                  {"scenario-hash", scenario_hash(s)},
                  {"grid-hash", grid_hash(s)}};
  r.table.scenario = dump_scenario(s);
  return r;
}

/// Output directory: explicit override, else $QCSIM_OUTPUT_DIR, else output.dir.
inline std::filesystem::path output_directory(const Scenario& s, const std::string& override_dir = {}) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("QCSIM_OUTPUT_DIR"); env && *env) return env;
  return s.output_dir;
}

struct WrittenFiles {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> snapshot;
};

inline WrittenFiles write_outputs(const Scenario& s, const RunResult& r, const std::filesystem::path& dir) {
  WrittenFiles w;
  w.csv = dir / (s.output_name + ".csv");
  save_csv(r.table, w.csv);
  if (s.snapshot) {
    const auto path = dir / (s.output_name + ".snap");
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (!std::is_same_v<T, std::monostate>) {
            save_snapshot(st, path);
            w.snapshot = path;
          }
        },
        r.final_state);
  }
  return w;
}

}  // namespace qcsim::io
