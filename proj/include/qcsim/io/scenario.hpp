#pragma once

// Scenario files: '#' comments, [section] headers, key = value lines.
// Every key has a default; dump() writes all of them back in a fixed order.
//
// [grid]        q_min q_max nq  p_min p_max np  xi_min xi_max nxi
//               classical_boundary quantum_boundary (periodic | bounded)
//               kinetic (finite_difference | spectral)  dq dp (central | spectral)
// [potential]   type (zero | harmonic | bilinear | gaussian_bump | tabulated)
//               k | c | v0 w | r_min r_max values (comma list)
// [physics]     hbar
// [initial]     q0 p0 smearing_q smearing_p (grid cells)
//               psi (gaussian | samples)  center width momentum | file
// [method]      name  quantum_step order force_term support_threshold min_trajectories
// [integrator]  dt t_final stride scheme (rk4 | exact_dense) safety check_cfl
//               rescale_norm norm_tolerance
// [output]      dir name observables snapshot seed

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcsim/dense.hpp"
#include "qcsim/generator.hpp"
#include "qcsim/generator_wigner.hpp"
#include "qcsim/meanfield.hpp"
#include "qcsim/propagators.hpp"
#include "qcsim/io/table.hpp"

namespace qcsim::io {

enum class Method { FullQCLEConfig, FullQCLEWigner, MeanFieldDistribution, Ehrenfest, HeisenbergSymbols, OracleDense };

inline const std::vector<std::pair<Method, std::string>>& method_names() {
  static const std::vector<std::pair<Method, std::string>> m{
      {Method::FullQCLEConfig, "FullQCLE-Config"},   {Method::FullQCLEWigner, "FullQCLE-Wigner"},
      {Method::MeanFieldDistribution, "MeanFieldDistribution"}, {Method::Ehrenfest, "Ehrenfest"},
      {Method::HeisenbergSymbols, "HeisenbergSymbols"}, {Method::OracleDense, "OracleDense"}};
  return m;
}

inline std::string to_string(Method m) {
  for (const auto& [k, v] : method_names())
    if (k == m) return v;
  return "?";
}

enum class PsiFamily { Gaussian, Samples };

inline const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> v{"q_c", "p_c", "q_q", "p_q", "H", "correlation_norm", "norm"};
  return v;
}

struct GridSpec {
  double min = -4.0;
  double max = 4.0;
  std::size_t n = 16;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Scenario {
  GridSpec q{-4.0, 4.0, 16}, p{-4.0, 4.0, 16}, xi{-8.0, 8.0, 32};
  Boundary classical_boundary = Boundary::Periodic;
  Boundary quantum_boundary = Boundary::Periodic;
  KineticScheme kinetic = KineticScheme::FiniteDifference;
  DerivativeScheme dq = DerivativeScheme::Central;
  DerivativeScheme dp = DerivativeScheme::Central;

  Potential potential = potentials::Zero{};
  double hbar = 1.0;

  ClassicalPhasePoint x0{0.0, 0.0};
  double smearing_q = 3.0;  // in q cells
  double smearing_p = 3.0;  // in p cells
  PsiFamily psi = PsiFamily::Gaussian;
  double psi_center = 0.0, psi_width = 1.0, psi_momentum = 0.0;
  std::string psi_file;

  Method method = Method::Ehrenfest;
  QuantumStep quantum_step = QuantumStep::CrankNicolson;
  int order = 2;
  ForceTerm force_term = ForceTerm::Symmetrized;
  double support_threshold = 1e-12;
  std::size_t min_trajectories = 1;

  IntegratorConfig integrator{};

  std::string output_dir = "out";
  std::string output_name = "run";
  std::vector<std::string> observables{"q_c", "p_c", "q_q", "p_q", "H"};
  bool snapshot = false;
  std::uint64_t seed = 0;

  PhaseSpaceGrid classical_grid() const {
    return {SpatialGrid(q.min, q.max, q.n, classical_boundary), SpatialGrid(p.min, p.max, p.n, classical_boundary)};
  }
  SpatialGrid quantum_grid() const { return SpatialGrid(xi.min, xi.max, xi.n, quantum_boundary); }
  Smearing smearing() const {
    const auto g = classical_grid();
    return {smearing_q * g.q().spacing(), smearing_p * g.p().spacing()};
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {
  std::string value;
  int line;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

/// Typed access to one section; every consumed key is erased so that the
/// leftovers are exactly the unknown keys.
class SectionReader {
 public:
  SectionReader(Sections& all, std::string name) : name_(std::move(name)) {
    auto it = all.find(name_);
    if (it != all.end()) {
      entries_ = std::move(it->second);
      all.erase(it);
    }
  }
  /// Whatever was not consumed is an unknown key.
  void finish() const {
    if (entries_.empty()) return;
    const auto& [k, e] = *entries_.begin();
    throw ValidationError(name_ + "." + k, "unknown key (line " + std::to_string(e.line) + ")");
  }

  std::string key(const std::string& k) const { return name_ + "." + k; }

  std::optional<Entry> take(const std::string& k) {
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    Entry e = it->second;
    entries_.erase(it);
    return e;
  }

  [[noreturn]] void fail(const std::string& k, const Entry& e, const std::string& what) const {
    throw ValidationError(key(k), what + " (line " + std::to_string(e.line) + ", got '" + e.value + "')");
  }

  void real(const std::string& k, double& out) {
    if (auto e = take(k)) {
      try {
        std::size_t used = 0;
        out = std::stod(e->value, &used);
        if (used != e->value.size() || !std::isfinite(out)) fail(k, *e, "expected a finite number");
      } catch (const std::logic_error&) {
        fail(k, *e, "expected a finite number");
      }
    }
  }
  template <class Int>
  void integer(const std::string& k, Int& out) {
    if (auto e = take(k)) {
      const auto& s = e->value;
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        fail(k, *e, "expected a non-negative integer");
      try {
        out = static_cast<Int>(std::stoull(s));
      } catch (const std::logic_error&) {
        fail(k, *e, "integer out of range");
      }
    }
  }
  void boolean(const std::string& k, bool& out) {
    if (auto e = take(k)) {
      if (e->value == "true") out = true;
      else if (e->value == "false") out = false;
      else fail(k, *e, "expected true or false");
    }
  }
  void text(const std::string& k, std::string& out) {
    if (auto e = take(k)) out = e->value;
  }
  template <class T>
  void choice(const std::string& k, T& out, const std::vector<std::pair<T, std::string>>& options) {
    if (auto e = take(k)) {
      for (const auto& [v, s] : options)
        if (s == e->value) {
          out = v;
          return;
        }
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : " | ") + o.second;
      fail(k, *e, "expected one of " + list);
    }
  }
  /// Rejects a key that does not apply (e.g. potential.k for gaussian_bump).
  void forbid(const std::string& k, const std::string& why) {
    if (auto e = take(k)) fail(k, *e, why);
  }

 private:
  std::string name_;
  std::map<std::string, Entry> entries_;
};

inline Sections tokenize(std::string_view text) {
  Sections out;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw ParseError(line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty() || section.find_first_of(" \t[]=") != std::string::npos)
        throw ParseError(line, "malformed section header '" + s + "'");
      if (out.count(section)) throw ParseError(line, "section [" + section + "] appears twice");
      out[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t[]") != std::string::npos) throw ParseError(line, "malformed key");
    if (section.empty()) throw ParseError(line, "key '" + key + "' appears before any [section]");
    auto& sec = out[section];
    if (sec.count(key)) throw ParseError(line, "duplicate key " + section + "." + key);
    sec[key] = {value, line};
  }
  return out;
}

inline const std::vector<std::pair<Boundary, std::string>> kBoundaries{{Boundary::Periodic, "periodic"},
                                                                       {Boundary::Bounded, "bounded"}};
inline const std::vector<std::pair<KineticScheme, std::string>> kKinetic{
    {KineticScheme::FiniteDifference, "finite_difference"}, {KineticScheme::Spectral, "spectral"}};
inline const std::vector<std::pair<DerivativeScheme, std::string>> kDeriv{{DerivativeScheme::Central, "central"},
                                                                         {DerivativeScheme::Spectral, "spectral"}};
inline const std::vector<std::pair<PsiFamily, std::string>> kPsi{{PsiFamily::Gaussian, "gaussian"},
                                                                 {PsiFamily::Samples, "samples"}};
inline const std::vector<std::pair<QuantumStep, std::string>> kQuantumStep{
    {QuantumStep::CrankNicolson, "crank_nicolson"}, {QuantumStep::SplitOperator, "split_operator"}};
inline const std::vector<std::pair<ForceTerm, std::string>> kForce{{ForceTerm::Symmetrized, "symmetrized"},
                                                                  {ForceTerm::Local, "local"}};
inline const std::vector<std::pair<TimeScheme, std::string>> kScheme{{TimeScheme::RK4, "rk4"},
                                                                    {TimeScheme::ExactDense, "exact_dense"}};

template <class T>
std::string name_of(T v, const std::vector<std::pair<T, std::string>>& options) {
  for (const auto& [k, s] : options)
    if (k == v) return s;
  return "?";
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& item : split(s, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline void read_grid_axis(SectionReader& r, const std::string& axis, const std::string& count, GridSpec& g) {
  r.real(axis + "_min", g.min);
  r.real(axis + "_max", g.max);
  r.integer(count, g.n);
}

inline Potential read_potential(SectionReader& r) {
  std::string type = "zero";
  r.text("type", type);
  const std::vector<std::string> all{"k", "c", "v0", "w", "r_min", "r_max", "values"};
  auto forbid_others = [&](const std::vector<std::string>& allowed) {
    for (const auto& k : all)
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        r.forbid(k, "not a parameter of potential type " + type);
  };
  try {
    if (type == "zero") {
      forbid_others({});
      return potentials::Zero{};
    }
    if (type == "harmonic") {
      forbid_others({"k"});
      potentials::Harmonic h;
      r.real("k", h.k);
      return h;
    }
    if (type == "bilinear") {
      forbid_others({"c"});
      potentials::Bilinear b;
      r.real("c", b.c);
      return b;
    }
    if (type == "gaussian_bump") {
      forbid_others({"v0", "w"});
      potentials::GaussianBump g;
      r.real("v0", g.v0);
      r.real("w", g.w);
      return g;
    }
    if (type == "tabulated") {
      forbid_others({"r_min", "r_max", "values"});
      double lo = -1.0, hi = 1.0;
      r.real("r_min", lo);
      r.real("r_max", hi);
      std::vector<double> v;
      if (auto e = r.take("values")) {
        for (const auto& item : split_list(e->value)) {
          try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("");
          } catch (const std::logic_error&) {
            r.fail("values", *e, "expected a comma-separated list of numbers");
          }
        }
      }
      return potentials::Tabulated(lo, hi, std::move(v));
    }
  } catch (const ConfigError& e) {
    throw ValidationError(r.key("type"), e.what());
  }
  throw ValidationError(r.key("type"), "unknown potential type '" + type +
                                           "' (expected zero | harmonic | bilinear | gaussian_bump | tabulated)");
}

}  // namespace detail

/// Method-specific constraints, checked before any work is done.
inline void validate(const Scenario& s) {
  auto grid_ok = [](const GridSpec& g, const std::string& axis, const std::string& count) {
    if (!(g.max > g.min)) throw ValidationError("grid." + axis + "_max", "must exceed grid." + axis + "_min");
    if (g.n < 2) throw ValidationError("grid." + count, "must be at least 2");
  };
  grid_ok(s.q, "q", "nq");
  grid_ok(s.p, "p", "np");
  grid_ok(s.xi, "xi", "nxi");
  if (!(s.hbar > 0.0)) throw ValidationError("physics.hbar", "must be positive");
  if (s.smearing_q < 2.0) throw ValidationError("initial.smearing_q", "must be at least 2 grid cells");
  if (s.smearing_p < 2.0) throw ValidationError("initial.smearing_p", "must be at least 2 grid cells");
  if (s.psi == PsiFamily::Gaussian && !(s.psi_width > 0.0)) throw ValidationError("initial.width", "must be positive");
  if (s.psi == PsiFamily::Samples && s.psi_file.empty())
    throw ValidationError("initial.file", "psi = samples needs a snapshot file");
  if (s.dq == DerivativeScheme::Spectral && s.classical_boundary != Boundary::Periodic)
    throw ValidationError("grid.dq", "spectral derivative needs a periodic classical grid");
  if (s.dp == DerivativeScheme::Spectral && s.classical_boundary != Boundary::Periodic)
    throw ValidationError("grid.dp", "spectral derivative needs a periodic classical grid");
  if (s.kinetic == KineticScheme::Spectral && s.quantum_boundary != Boundary::Periodic)
    throw ValidationError("grid.kinetic", "spectral kinetic energy needs a periodic quantum grid");
  try {
    s.integrator.validate();
  } catch (const ConfigError& e) {
    throw ValidationError("integrator", e.what());
  }
  for (const auto& o : s.observables)
    if (std::find(known_observables().begin(), known_observables().end(), o) == known_observables().end())
      throw ValidationError("output.observables", "unknown observable '" + o + "'");
  if (s.observables.empty()) throw ValidationError("output.observables", "at least one observable is required");
  for (std::size_t i = 0; i < s.observables.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (s.observables[i] == s.observables[j])
        throw ValidationError("output.observables", "'" + s.observables[i] + "' listed twice");
  if (s.output_name.empty() || s.output_name.find('/') != std::string::npos)
    throw ValidationError("output.name", "must be a plain file stem");

  const bool wigner = s.method == Method::FullQCLEWigner || s.method == Method::HeisenbergSymbols;
  if (wigner && s.quantum_boundary != Boundary::Periodic)
    throw ValidationError("grid.quantum_boundary", to_string(s.method) + " needs a periodic quantum grid");
  if (s.method == Method::FullQCLEWigner && s.kinetic != KineticScheme::FiniteDifference)
    throw ValidationError("grid.kinetic", "FullQCLE-Wigner supports finite_difference only");
  if (s.method == Method::Ehrenfest && s.quantum_step == QuantumStep::SplitOperator &&
      s.quantum_boundary != Boundary::Periodic)
    throw ValidationError("method.quantum_step", "split_operator needs a periodic quantum grid");
  if ((s.method == Method::Ehrenfest || s.method == Method::HeisenbergSymbols) && s.order != 2 && s.order != 4)
    throw ValidationError("method.order", "must be 2 or 4");
  if (s.method == Method::HeisenbergSymbols || s.method == Method::Ehrenfest ||
      s.method == Method::MeanFieldDistribution)
    for (const auto& o : s.observables)
      if (o == "correlation_norm")
        throw ValidationError("output.observables", "correlation_norm needs a full QCLE method; " +
                                                        to_string(s.method) + " carries no correlation");
  if (s.method == Method::HeisenbergSymbols) {
    if (s.snapshot) throw ValidationError("output.snapshot", "HeisenbergSymbols has no single state to snapshot");
    if (s.integrator.scheme != TimeScheme::RK4)
      throw ValidationError("integrator.scheme", "HeisenbergSymbols integrates its own trajectories");
  }
  if (s.method == Method::OracleDense) {
    const std::size_t dim = s.q.n * s.p.n * s.xi.n * s.xi.n;
    if (dim > kOracleCap)
      throw ValidationError("method.name", "OracleDense dimension " + std::to_string(dim) + " exceeds the cap " +
                                               std::to_string(kOracleCap));
  }
  if (s.integrator.scheme == TimeScheme::ExactDense && s.method != Method::OracleDense &&
      s.method != Method::FullQCLEConfig && s.method != Method::FullQCLEWigner)
    throw ValidationError("integrator.scheme", "exact_dense applies to the full QCLE methods only");
  if (s.integrator.scheme == TimeScheme::ExactDense) {
    const std::size_t dim = s.q.n * s.p.n * s.xi.n * s.xi.n;
    if (dim > kOracleCap) throw ValidationError("integrator.scheme", "exact_dense dimension exceeds the cap");
  }
  try {
    s.potential.check_range(s.classical_grid().q(), s.quantum_grid());
  } catch (const Error& e) {
    throw ValidationError("potential", e.what());
  }
}

inline Scenario parse_scenario(std::string_view text) {
  auto sections = detail::tokenize(text);
  Scenario s;
  {
    detail::SectionReader r(sections, "grid");
    detail::read_grid_axis(r, "q", "nq", s.q);
    detail::read_grid_axis(r, "p", "np", s.p);
    detail::read_grid_axis(r, "xi", "nxi", s.xi);
    r.choice("classical_boundary", s.classical_boundary, detail::kBoundaries);
    r.choice("quantum_boundary", s.quantum_boundary, detail::kBoundaries);
    r.choice("kinetic", s.kinetic, detail::kKinetic);
    r.choice("dq", s.dq, detail::kDeriv);
    r.choice("dp", s.dp, detail::kDeriv);
    r.finish();
  }
  {
    detail::SectionReader r(sections, "potential");
    s.potential = detail::read_potential(r);
    r.finish();
  }
  {
    detail::SectionReader r(sections, "physics");
    r.real("hbar", s.hbar);
    r.finish();
  }
  {
    detail::SectionReader r(sections, "initial");
    r.real("q0", s.x0.q);
    r.real("p0", s.x0.p);
    r.real("smearing_q", s.smearing_q);
    r.real("smearing_p", s.smearing_p);
    r.choice("psi", s.psi, detail::kPsi);
    if (s.psi == PsiFamily::Gaussian) {
      r.real("center", s.psi_center);
      r.real("width", s.psi_width);
      r.real("momentum", s.psi_momentum);
      r.forbid("file", "only used with psi = samples");
    } else {
      r.text("file", s.psi_file);
      for (const char* k : {"center", "width", "momentum"}) r.forbid(k, "only used with psi = gaussian");
    }
    r.finish();
  }
  {
    detail::SectionReader r(sections, "method");
    r.choice("name", s.method, method_names());
    r.choice("quantum_step", s.quantum_step, detail::kQuantumStep);
    r.integer("order", s.order);
    r.choice("force_term", s.force_term, detail::kForce);
    r.real("support_threshold", s.support_threshold);
    r.integer("min_trajectories", s.min_trajectories);
    r.finish();
  }
  {
    detail::SectionReader r(sections, "integrator");
    auto& c = s.integrator;
    r.real("dt", c.dt);
    r.real("t_final", c.t_final);
    r.integer("stride", c.stride);
    r.choice("scheme", c.scheme, detail::kScheme);
    r.real("safety", c.safety);
    r.boolean("check_cfl", c.check_cfl);
    r.boolean("rescale_norm", c.rescale_norm);
    r.real("norm_tolerance", c.norm_tolerance);
    r.finish();
  }
  {
    detail::SectionReader r(sections, "output");
    r.text("dir", s.output_dir);
    r.text("name", s.output_name);
    if (auto e = r.take("observables")) s.observables = detail::split_list(e->value);
    r.boolean("snapshot", s.snapshot);
    r.integer("seed", s.seed);
    r.finish();
  }
  if (!sections.empty()) {
    const auto& [name, entries] = *sections.begin();
    if (entries.empty()) throw ValidationError(name, "unknown section");
    const auto& [k, e] = *entries.begin();
    throw ValidationError(name + "." + k, "unknown key (line " + std::to_string(e.line) + ")");
  }
  validate(s);
  return s;
}

/// Normalized dump: every key, fixed order, 17 significant digits.
inline std::string dump_scenario(const Scenario& s) {
  using detail::fmt;
  std::string o;
  auto kv = [&o](const std::string& k, const std::string& v) { o += k + " = " + v + "\n"; };
  o += "[grid]\n";
  kv("q_min", fmt(s.q.min));
  kv("q_max", fmt(s.q.max));
  kv("nq", std::to_string(s.q.n));
  kv("p_min", fmt(s.p.min));
  kv("p_max", fmt(s.p.max));
  kv("np", std::to_string(s.p.n));
  kv("xi_min", fmt(s.xi.min));
  kv("xi_max", fmt(s.xi.max));
  kv("nxi", std::to_string(s.xi.n));
  kv("classical_boundary", detail::name_of(s.classical_boundary, detail::kBoundaries));
  kv("quantum_boundary", detail::name_of(s.quantum_boundary, detail::kBoundaries));
  kv("kinetic", detail::name_of(s.kinetic, detail::kKinetic));
  kv("dq", detail::name_of(s.dq, detail::kDeriv));
  kv("dp", detail::name_of(s.dp, detail::kDeriv));

  o += "\n[potential]\n";
  kv("type", s.potential.name());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, potentials::Harmonic>) kv("k", fmt(p.k));
        else if constexpr (std::is_same_v<T, potentials::Bilinear>) kv("c", fmt(p.c));
        else if constexpr (std::is_same_v<T, potentials::GaussianBump>) {
          kv("v0", fmt(p.v0));
          kv("w", fmt(p.w));
        } else if constexpr (std::is_same_v<T, potentials::Tabulated>) {
          kv("r_min", fmt(p.r_min()));
          kv("r_max", fmt(p.r_max()));
          std::string v;
          for (double y : p.values()) v += (v.empty() ? "" : ", ") + fmt(y);
          kv("values", v);
        }
      },
      s.potential.variant());

  o += "\n[physics]\n";
  kv("hbar", fmt(s.hbar));

  o += "\n[initial]\n";
  kv("q0", fmt(s.x0.q));
  kv("p0", fmt(s.x0.p));
  kv("smearing_q", fmt(s.smearing_q));
  kv("smearing_p", fmt(s.smearing_p));
  kv("psi", detail::name_of(s.psi, detail::kPsi));
  if (s.psi == PsiFamily::Gaussian) {
    kv("center", fmt(s.psi_center));
    kv("width", fmt(s.psi_width));
    kv("momentum", fmt(s.psi_momentum));
  } else {
    kv("file", s.psi_file);
  }

  o += "\n[method]\n";
  kv("name", to_string(s.method));
  kv("quantum_step", detail::name_of(s.quantum_step, detail::kQuantumStep));
  kv("order", std::to_string(s.order));
  kv("force_term", detail::name_of(s.force_term, detail::kForce));
  kv("support_threshold", fmt(s.support_threshold));
  kv("min_trajectories", std::to_string(s.min_trajectories));

  o += "\n[integrator]\n";
  const auto& c = s.integrator;
  kv("dt", fmt(c.dt));
  kv("t_final", fmt(c.t_final));
  kv("stride", std::to_string(c.stride));
  kv("scheme", detail::name_of(c.scheme, detail::kScheme));
  kv("safety", fmt(c.safety));
  kv("check_cfl", c.check_cfl ? "true" : "false");
  kv("rescale_norm", c.rescale_norm ? "true" : "false");
  kv("norm_tolerance", fmt(c.norm_tolerance));

  o += "\n[output]\n";
  kv("dir", s.output_dir);
  kv("name", s.output_name);
  std::string obs;
  for (const auto& n : s.observables) obs += (obs.empty() ? "" : ", ") + n;
  kv("observables", obs);
  kv("snapshot", s.snapshot ? "true" : "false");
  kv("seed", std::to_string(s.seed));
  return o;
}

/// Hash of the normalized dump; the output directory is excluded so that the
/// same physics run into another folder keeps its identity.
inline std::string scenario_hash(const Scenario& s) {
  Scenario t = s;
  t.output_dir.clear();
  return hex64(fnv1a(dump_scenario(t)));
}

inline std::string grid_hash(const Scenario& s) {
  std::string g;
  for (const auto* a : {&s.q, &s.p, &s.xi}) g += detail::fmt(a->min) + " " + detail::fmt(a->max) + " " + std::to_string(a->n) + ";";
  g += std::string(to_string(s.classical_boundary)) + ";" + to_string(s.quantum_boundary) + ";" + detail::fmt(s.hbar);
  return hex64(fnv1a(g));
}

inline Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

}  // namespace qcsim::io
