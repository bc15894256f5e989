#pragma once

#include "qcsim/fields.hpp"
#include "qcsim/kinetic.hpp"
#include "qcsim/potential.hpp"

namespace qcsim {

/// H = H_c(X)·Î + H_q + H_int(X) for one classical and one quantum particle
/// with unit masses: H_c = p²/2, H_q = −(ħ²/2)∂²_ξ, H_int = φ(q, ξ̂).
class HybridHamiltonian {
 public:
  HybridHamiltonian() = default;
  HybridHamiltonian(PhaseSpaceGrid classical, SpatialGrid quantum, Potential phi, double hbar,
                    KineticScheme scheme)
      : classical_(classical), quantum_(quantum), phi_(std::move(phi)), hbar_(hbar),
        kinetic_(quantum, hbar, scheme) {
    if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
    phi_.check_range(classical_.q(), quantum_);
  }

  const PhaseSpaceGrid& classical() const { return classical_; }
  const SpatialGrid& quantum() const { return quantum_; }
  const Potential& potential() const { return phi_; }
  double hbar() const { return hbar_; }
  const KineticOperator& kinetic() const { return kinetic_; }

  double h_c(double /*q*/, double p) const { return 0.5 * p * p; }
  const Matrix& h_q() const { return kinetic_.matrix(); }

  /// Diagonal of H_int at classical position q.
  Eigen::VectorXd h_int(double q) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(quantum_.size()));
    for (std::size_t j = 0; j < quantum_.size(); ++j) v(static_cast<Eigen::Index>(j)) = phi_(q, quantum_.point(j));
    return v;
  }
  /// Diagonal of ∂_q H_int at classical position q.
  Eigen::VectorXd h_int_dq(double q) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(quantum_.size()));
    for (std::size_t j = 0; j < quantum_.size(); ++j) v(static_cast<Eigen::Index>(j)) = phi_.dq(q, quantum_.point(j));
    return v;
  }

  /// H as an Observable-role field (operator matrices at every node).
  HybridDensityField as_observable() const {
    HybridDensityField h(classical_, quantum_, Role::Observable);
    for (std::size_t iq = 0; iq < classical_.q().size(); ++iq) {
      const Eigen::VectorXd v = h_int(classical_.q().point(iq));
      for (std::size_t ip = 0; ip < classical_.p().size(); ++ip) {
        auto m = h.at(iq, ip);
        m = h_q();
        m.diagonal().array() += (v.array() + h_c(0.0, classical_.p().point(ip))).cast<cplx>();
      }
    }
    return h;
  }

 private:
  PhaseSpaceGrid classical_;
  SpatialGrid quantum_;
  Potential phi_;
  double hbar_ = 1.0;
  KineticOperator kinetic_;
};

inline HybridHamiltonian build_hamiltonian(const PhaseSpaceGrid& pgrid, const SpatialGrid& qgrid, const Potential& phi,
                                           double hbar = 1.0,
                                           KineticScheme scheme = KineticScheme::FiniteDifference) {
  return {pgrid, qgrid, phi, hbar, scheme};
}

}  // namespace qcsim
