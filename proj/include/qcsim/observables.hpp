#pragma once

#include <cmath>

#include "qcsim/fields.hpp"
#include "qcsim/hamiltonian.hpp"

namespace qcsim {

/// Σ_X w·Tr(A(X)·D(X))·dξ without role checks. This is the bilinear pairing
/// under which the generator is anti-adjoint.
inline cplx pairing(const HybridDensityField& a, const HybridDensityField& d) {
  if (!a.same_shape(d)) throw GridError("pairing of fields on different grids");
  const auto& g = a.classical();
  const auto& qg = a.quantum();
  cplx s = 0.0;
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) {
      const auto ma = a.at(iq, ip);
      const auto md = d.at(iq, ip);
      cplx tr = 0.0;
      for (std::size_t i = 0; i < qg.size(); ++i)
        tr += ma.row(static_cast<Eigen::Index>(i)).transpose().cwiseProduct(md.col(static_cast<Eigen::Index>(i))).sum() *
              qg.weight(i);
      s += g.weight(iq, ip) * tr;
    }
  return s;
}

/// ⟨A⟩ = Σ_X w·Tr(A(X)·D(X))·dξ.
inline double mean_value(const HybridDensityField& a, const HybridDensityField& d) {
  if (a.role() != Role::Observable) throw RoleError("mean_value: first argument must be an observable");
  if (d.role() != Role::State) throw RoleError("mean_value: second argument must be a state");
  const cplx v = pairing(a, d);
  if (std::abs(v.imag()) > 1e-9 * std::max(std::abs(v.real()), 1.0))
    throw NumericalError("mean value has imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

/// D(X) = Tr D(X)·dξ.
inline ClassicalDistribution marginal_classical(const HybridDensityField& d) {
  if (d.role() != Role::State) throw RoleError("marginal_classical requires a state");
  ClassicalDistribution c(d.classical());
  const auto& qg = d.quantum();
  for (std::size_t x = 0; x < d.points(); ++x) {
    double tr = 0.0;
    const auto m = d.at(x);
    for (std::size_t i = 0; i < qg.size(); ++i) tr += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() * qg.weight(i);
    c.data()(static_cast<Eigen::Index>(x)) = tr;
  }
  return c;
}

/// ρ̂ = Σ_X w·D(X), a kernel with Tr ρ̂·dξ = 1.
inline Matrix marginal_quantum(const HybridDensityField& d) {
  if (d.role() != Role::State) throw RoleError("marginal_quantum requires a state");
  const auto n = static_cast<Eigen::Index>(d.n());
  Matrix rho = Matrix::Zero(n, n);
  const auto& g = d.classical();
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip) rho += g.weight(iq, ip) * d.at(iq, ip);
  return rho;
}

/// Kernel trace Σ_i ρ_ii·w_i.
inline double kernel_trace(const Matrix& rho, const SpatialGrid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() * g.weight(i);
  return s;
}

/// Product field D_c(X)·ρ̂.
inline HybridDensityField product_state(const ClassicalDistribution& dc, const Matrix& rho, const SpatialGrid& qg) {
  HybridDensityField d(dc.grid(), qg, Role::State);
  for (std::size_t x = 0; x < d.points(); ++x) d.at(x) = dc.data()(static_cast<Eigen::Index>(x)) * rho;
  return d;
}

/// g(X) = D(X) − D_c(X)·ρ̂.
inline HybridDensityField correlation(const HybridDensityField& d) {
  HybridDensityField g = d - product_state(marginal_classical(d), marginal_quantum(d), d.quantum());
  g.set_role(Role::Observable);
  return g;
}

/// Hilbert–Schmidt norm (Σ_X w Σ_ij |g_ij|² dξ²)^{1/2}.
inline double field_norm(const HybridDensityField& g) {
  const auto& c = g.classical();
  const double dx = g.quantum().spacing();
  double s = 0.0;
  for (std::size_t iq = 0; iq < c.q().size(); ++iq)
    for (std::size_t ip = 0; ip < c.p().size(); ++ip) s += c.weight(iq, ip) * g.at(iq, ip).squaredNorm();
  return std::sqrt(s) * dx;
}

inline double correlation_norm(const HybridDensityField& d) { return field_norm(correlation(d)); }

namespace observables {

/// f(q, p)·Î at every node.
template <class F>
HybridDensityField classical(const PhaseSpaceGrid& g, const SpatialGrid& qg, F&& f) {
  HybridDensityField a(g, qg, Role::Observable);
  const auto n = static_cast<Eigen::Index>(qg.size());
  for (std::size_t iq = 0; iq < g.q().size(); ++iq)
    for (std::size_t ip = 0; ip < g.p().size(); ++ip)
      a.at(iq, ip) = f(g.q().point(iq), g.p().point(ip)) * Matrix::Identity(n, n);
  return a;
}

/// The same operator matrix at every node.
inline HybridDensityField quantum(const PhaseSpaceGrid& g, const SpatialGrid& qg, const Matrix& op) {
  HybridDensityField a(g, qg, Role::Observable);
  for (std::size_t x = 0; x < a.points(); ++x) a.at(x) = op;
  return a;
}

inline HybridDensityField identity(const PhaseSpaceGrid& g, const SpatialGrid& qg) {
  return classical(g, qg, [](double, double) { return 1.0; });
}
inline HybridDensityField q_c(const PhaseSpaceGrid& g, const SpatialGrid& qg) {
  return classical(g, qg, [](double q, double) { return q; });
}
inline HybridDensityField p_c(const PhaseSpaceGrid& g, const SpatialGrid& qg) {
  return classical(g, qg, [](double, double p) { return p; });
}
inline Matrix position_matrix(const SpatialGrid& qg) {
  const auto n = static_cast<Eigen::Index>(qg.size());
  Matrix x = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) x(i, i) = qg.point(static_cast<std::size_t>(i));
  return x;
}
inline HybridDensityField q_q(const PhaseSpaceGrid& g, const SpatialGrid& qg) {
  return quantum(g, qg, position_matrix(qg));
}
inline HybridDensityField p_q(const HybridHamiltonian& h) {
  return quantum(h.classical(), h.quantum(), h.kinetic().momentum_matrix());
}

}  // namespace observables

/// Mean of H under D.
inline double total_energy(const HybridDensityField& d, const HybridHamiltonian& h) {
  return mean_value(h.as_observable(), d);
}

}  // namespace qcsim
