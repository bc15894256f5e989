#pragma once

#include <numbers>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qcsim/generator.hpp"
#include "qcsim/generator_wigner.hpp"

namespace qcsim {

inline constexpr std::size_t kOracleCap = 4096;

/// The generator as an explicit matrix over the flattened field, together
/// with the bilinear pairing ⟨a, d⟩ = Σ_m w_m·a_m·d_{partner(m)}.
struct DenseGenerator {
  Matrix matrix;
  std::vector<std::size_t> partner;
  Eigen::VectorXd weight;

  Eigen::Index dim() const { return matrix.rows(); }
  cplx pair(const Vector& a, const Vector& d) const {
    cplx s = 0.0;
    for (Eigen::Index m = 0; m < a.size(); ++m) s += weight(m) * a(m) * d(static_cast<Eigen::Index>(partner[static_cast<std::size_t>(m)]));
    return s;
  }
};

namespace detail {

template <class Field, class Apply>
Matrix assemble_columns(const Field& proto, Apply&& apply) {
  const auto dim = proto.data().size();
  Matrix g(dim, dim);
  Field e = proto.zeros_like();
  for (Eigen::Index j = 0; j < dim; ++j) {
    e.data().setZero();
    e.data()(j) = 1.0;
    g.col(j) = apply(e).data();
  }
  return g;
}

inline void check_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap)
    throw SizeError("dense generator dimension " + std::to_string(dim) + " exceeds the oracle cap " + std::to_string(cap));
}

}  // namespace detail

inline DenseGenerator assemble_dense_generator(const GeneratorConfigRep& gen, std::size_t cap = kOracleCap) {
  const auto& h = gen.hamiltonian();
  HybridDensityField proto(h.classical(), h.quantum(), Role::Observable);
  detail::check_cap(static_cast<std::size_t>(proto.data().size()), cap);
  DenseGenerator d;
  d.matrix = detail::assemble_columns(proto, [&](const HybridDensityField& e) { return apply_generator_config(gen, e); });
  const std::size_t n = proto.n(), nb = n * n;
  d.partner.resize(static_cast<std::size_t>(proto.data().size()));
  d.weight.resize(proto.data().size());
  const auto& g = h.classical();
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {  // column-major block storage
          const std::size_t m = x * nb + j * n + i;
          d.partner[m] = x * nb + i * n + j;
          d.weight(static_cast<Eigen::Index>(m)) = g.weight(iq, ip) * h.quantum().weight(i);
        }
    }
  return d;
}

inline DenseGenerator assemble_dense_generator(const GeneratorWignerRep& gen, std::size_t cap = kOracleCap) {
  const auto& h = gen.hamiltonian();
  WignerField proto(h.classical(), gen.lattice(), Role::Observable);
  detail::check_cap(static_cast<std::size_t>(proto.data().size()), cap);
  DenseGenerator d;
  d.matrix = detail::assemble_columns(proto, [&](const WignerField& e) { return apply_generator_wigner(gen, e); });
  d.partner.resize(static_cast<std::size_t>(proto.data().size()));
  d.weight.resize(proto.data().size());
  const auto& g = h.classical();
  const auto& l = gen.lattice();
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const std::size_t x = g.index(iq, ip);
      for (std::size_t m = 0; m < l.size(); ++m) {
        const std::size_t idx = x * l.size() + m;
        d.partner[idx] = idx;
        d.weight(static_cast<Eigen::Index>(idx)) = g.weight(iq, ip) * l.weight() / (2.0 * std::numbers::pi * l.hbar());
      }
    }
  return d;
}

/// exp(sign·t·G) by scaling and squaring (Padé).
inline Matrix dense_exponential(const DenseGenerator& g, double t, int sign) {
  return (static_cast<double>(sign) * t * g.matrix).exp();
}

/// exp(sign·t·G) with a backward-error check: G must commute with its exponential.
inline Matrix checked_dense_exponential(const DenseGenerator& g, double t, int sign) {
  detail::check_cap(static_cast<std::size_t>(g.dim()), kOracleCap);
  const Matrix e = dense_exponential(g, t, sign);
  const double r = (g.matrix * e - e * g.matrix).cwiseAbs().maxCoeff();
  const double scale = g.matrix.cwiseAbs().maxCoeff() * std::max(1.0, e.cwiseAbs().maxCoeff());
  if (!std::isfinite(r) || r > 1e-9 * scale) throw NumericalError("dense exponential failed its residual check");
  return e;
}

inline Vector exact_dense_propagate(const Vector& v0, const DenseGenerator& g, double t, int sign) {
  if (v0.size() != g.dim()) throw SizeError("vector length does not match dense generator");
  detail::check_cap(static_cast<std::size_t>(g.dim()), kOracleCap);
  if (t == 0.0) return v0;
  return checked_dense_exponential(g, t, sign) * v0;
}

}  // namespace qcsim
