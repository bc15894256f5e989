#pragma once

// Random but valid scenarios, and surface-level rewrites of their dumps.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcsim/io/scenario.hpp"

namespace qcsim::testing {

/// Uniform double with all 53 bits random, so the dump has to carry 17 digits.
inline double rnd(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline io::Scenario random_scenario(std::mt19937_64& rng) {
  io::Scenario s;
  const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  s.method = io::method_names()[pick(6)].first;
  s.q = {rnd(rng, -6, -2), rnd(rng, 2, 6), 4 + pick(6)};
  s.p = {rnd(rng, -6, -2), rnd(rng, 2, 6), 4 + pick(6)};
  s.xi = {rnd(rng, -9, -4), rnd(rng, 4, 9), 4 + pick(4)};
  const bool needs_periodic = s.method == io::Method::FullQCLEWigner || s.method == io::Method::HeisenbergSymbols;
  s.quantum_boundary = needs_periodic || pick(2) ? Boundary::Periodic : Boundary::Bounded;
  s.classical_boundary = pick(2) ? Boundary::Periodic : Boundary::Bounded;
  if (s.classical_boundary == Boundary::Periodic) {
    s.dq = pick(2) ? DerivativeScheme::Spectral : DerivativeScheme::Central;
    s.dp = pick(2) ? DerivativeScheme::Spectral : DerivativeScheme::Central;
  }
  if (s.quantum_boundary == Boundary::Periodic && s.method != io::Method::FullQCLEWigner && pick(2))
    s.kinetic = KineticScheme::Spectral;
  switch (pick(5)) {
    case 0: s.potential = potentials::Zero{}; break;
    case 1: s.potential = potentials::Harmonic{rnd(rng, 0.1, 3)}; break;
    case 2: s.potential = potentials::Bilinear{rnd(rng, -2, 2)}; break;
    case 3: s.potential = potentials::GaussianBump{rnd(rng, -2, 2), rnd(rng, 0.2, 2)}; break;
    default: {
      std::vector<double> v(5 + pick(5));
      for (auto& y : v) y = rnd(rng, -1, 1);
      s.potential = potentials::Tabulated(-20, 20, v);
    }
  }
  s.hbar = rnd(rng, 0.5, 2);
  s.x0 = {rnd(rng, -1, 1), rnd(rng, -1, 1)};
  s.smearing_q = rnd(rng, 2, 5);
  s.smearing_p = rnd(rng, 2, 5);
  if (pick(4) == 0) {
    s.psi = io::PsiFamily::Samples;
    s.psi_file = "psi_" + std::to_string(rng() % 1000) + ".snap";
  } else {
    s.psi_center = rnd(rng, -1, 1);
    s.psi_width = rnd(rng, 0.3, 2);
    s.psi_momentum = rnd(rng, -1, 1);
  }
  s.quantum_step = s.quantum_boundary == Boundary::Periodic && pick(2) ? QuantumStep::SplitOperator
                                                                       : QuantumStep::CrankNicolson;
  s.order = pick(2) ? 4 : 2;
  s.force_term = pick(2) ? ForceTerm::Local : ForceTerm::Symmetrized;
  s.support_threshold = std::pow(10.0, -static_cast<double>(6 + pick(8)));
  s.min_trajectories = 1 + pick(100);
  s.integrator.dt = 0.01 * static_cast<double>(1 + pick(5));
  s.integrator.t_final = s.integrator.dt * static_cast<double>(pick(200));
  s.integrator.stride = 1 + pick(10);
  s.integrator.safety = rnd(rng, 0.1, 1);
  s.integrator.check_cfl = pick(2);
  s.integrator.rescale_norm = pick(2);
  s.integrator.norm_tolerance = rnd(rng, 1e-8, 1e-2);
  s.output_dir = "out/dir_" + std::to_string(pick(100));
  s.output_name = "case" + std::to_string(pick(1000));
  std::vector<std::string> obs{"q_c", "p_c", "q_q", "p_q", "H", "norm"};
  if (s.method == io::Method::FullQCLEConfig || s.method == io::Method::FullQCLEWigner ||
      s.method == io::Method::OracleDense)
    obs.push_back("correlation_norm");
  std::shuffle(obs.begin(), obs.end(), rng);
  obs.resize(1 + pick(obs.size()));
  s.observables = obs;
  s.snapshot = s.method != io::Method::HeisenbergSymbols && pick(2);
  s.seed = rng();
  if (s.method == io::Method::OracleDense) {
    s.q.n = s.p.n = 4;
    s.xi.n = 4;
  }
  return s;
}

/// Same content, different surface: sections and keys shuffled, comments,
/// blank lines and irregular spacing inserted.
inline std::string perturb(const std::string& dump, std::mt19937_64& rng) {
  std::vector<std::pair<std::string, std::vector<std::string>>> secs;
  std::istringstream in(dump);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '[') secs.push_back({line, {}});
    else secs.back().second.push_back(line);
  }
  std::shuffle(secs.begin(), secs.end(), rng);
  std::string out = "# fuzzed\n";
  for (auto& [h, keys] : secs) {
    std::shuffle(keys.begin(), keys.end(), rng);
    out += (rng() % 2 ? "  " : "") + h + (rng() % 2 ? "   # section\n" : "\n");
    for (const auto& kv : keys) {
      const auto eq = kv.find(" = ");
      const std::string pad1(rng() % 3, ' '), pad2(rng() % 3, rng() % 2 ? ' ' : '\t');
      out += pad1 + kv.substr(0, eq) + pad2 + "=" + pad2 + kv.substr(eq + 3) + (rng() % 3 == 0 ? "  # note\n" : "\n");
      if (rng() % 4 == 0) out += "\n";
    }
  }
  return out;
}

/// A coupled full-QCLE scenario small enough to run in well under a second.
inline io::Scenario small_scenario() {
  io::Scenario s;
  s.method = io::Method::FullQCLEConfig;
  s.q = {-4, 4, 6};
  s.p = {-4, 4, 6};
  s.xi = {-4, 4, 6};
  s.potential = potentials::GaussianBump{1.0, 1.0};
  s.x0 = {0.3, 0.2};
  s.smearing_q = s.smearing_p = 2.0;
  s.psi_center = 0.2;
  s.psi_width = 0.9;
  s.integrator.dt = 0.01;
  s.integrator.t_final = 0.2;
  s.integrator.stride = 10;
  s.observables = {"q_c", "p_c", "q_q", "p_q", "H", "norm"};
  return s;
}

}  // namespace qcsim::testing
