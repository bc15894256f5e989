#pragma once

#include <Eigen/Dense>

#include "qcsim/error.hpp"
#include "qcsim/fft.hpp"
#include "qcsim/grid.hpp"

namespace qcsim {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class KineticScheme { FiniteDifference, Spectral };

inline const char* to_string(KineticScheme s) {
  return s == KineticScheme::Spectral ? "spectral" : "fd";
}

/// Discretized −(ħ²/2)∂²_ξ on a quantum grid. The 3-point stencil wraps on
/// periodic grids and is zero-extended (Dirichlet) on bounded grids; the
/// spectral variant needs a periodic grid.
class KineticOperator {
 public:
  KineticOperator() = default;
  KineticOperator(const SpatialGrid& grid, double hbar, KineticScheme scheme)
      : grid_(grid), hbar_(hbar), scheme_(scheme) {
    if (scheme == KineticScheme::Spectral && !grid.periodic())
      throw ConfigError("spectral kinetic scheme requires a periodic quantum grid");
    const auto n = grid.size();
    energies_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double kk = wavenumber(k, n, grid.spacing());
      energies_(static_cast<Eigen::Index>(k)) = 0.5 * hbar * hbar * kk * kk;
    }
    matrix_ = build_matrix();
    real_ = matrix_.real();
  }

  const SpatialGrid& grid() const { return grid_; }
  double hbar() const { return hbar_; }
  KineticScheme scheme() const { return scheme_; }
  /// Dense Hermitian operator matrix.
  const Matrix& matrix() const { return matrix_; }

  /// out = T·M (operator acting on the row index).
  Matrix apply_left(const Matrix& m) const {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    Matrix out(n, m.cols());
    if (scheme_ == KineticScheme::FiniteDifference) {
      const double c = -0.5 * hbar_ * hbar_ / (grid_.spacing() * grid_.spacing());
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto up = neighbour(grid_, static_cast<std::size_t>(i), 1);
        const auto dn = neighbour(grid_, static_cast<std::size_t>(i), -1);
        out.row(i) = -2.0 * c * m.row(i);
        if (up < grid_.size()) out.row(i) += c * m.row(static_cast<Eigen::Index>(up));
        if (dn < grid_.size()) out.row(i) += c * m.row(static_cast<Eigen::Index>(dn));
      }
      return out;
    }
    // dense T beats a per-column FFT at the block sizes used here; T is real
    // (E(k) = E(-k)), and a real x complex product costs half
    out.noalias() = real_ * m;
    return out;
  }

  /// [T, M] = T·M − M·T.
  Matrix commutator(const Matrix& m) const {
    if (scheme_ == KineticScheme::Spectral) {
      Matrix out(m.rows(), m.cols());
      out.noalias() = real_ * m;
      out.noalias() -= m * real_;
      return out;
    }
    return apply_left(m) - apply_left(m.adjoint()).adjoint();
  }

  /// Largest minus smallest eigenvalue of T (sets the fastest quantum frequency).
  double spectral_width() const {
    if (scheme_ == KineticScheme::Spectral) return energies_.maxCoeff();
    return 2.0 * hbar_ * hbar_ / (grid_.spacing() * grid_.spacing());
  }

  /// Kinetic energy multipliers per DFT bin (spectral scheme).
  const Eigen::VectorXd& bin_energies() const { return energies_; }

  /// Eigenvalues of T per DFT bin for either scheme (periodic grids are circulant).
  Eigen::VectorXd circulant_energies() const {
    if (!grid_.periodic()) throw UnsupportedError("kinetic operator is not circulant on a bounded grid");
    if (scheme_ == KineticScheme::Spectral) return energies_;
    Eigen::VectorXd e(energies_.size());
    const double dx = grid_.spacing();
    for (Eigen::Index k = 0; k < e.size(); ++k) {
      const double s = std::sin(0.5 * wavenumber(static_cast<std::size_t>(k), grid_.size(), dx) * dx);
      e(k) = 2.0 * hbar_ * hbar_ / (dx * dx) * s * s;
    }
    return e;
  }

  /// Momentum operator matrix −iħ∂_ξ: spectral (Nyquist bin dropped) or central difference.
  Matrix momentum_matrix() const {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    Matrix p = Matrix::Zero(n, n);
    if (scheme_ == KineticScheme::FiniteDifference) {
      const double c = hbar_ / (2.0 * grid_.spacing());
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto up = neighbour(grid_, static_cast<std::size_t>(i), 1);
        const auto dn = neighbour(grid_, static_cast<std::size_t>(i), -1);
        if (up < grid_.size()) p(i, static_cast<Eigen::Index>(up)) += cplx(0.0, -c);
        if (dn < grid_.size()) p(i, static_cast<Eigen::Index>(dn)) += cplx(0.0, c);
      }
      return p;
    }
    const auto un = grid_.size();
    for (std::size_t k = 0; k < un; ++k) {
      if (un % 2 == 0 && k == un / 2) continue;
      const double kk = wavenumber(k, un, grid_.spacing());
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          p(i, j) += hbar_ * kk / static_cast<double>(un) *
                     std::exp(cplx(0.0, kk * grid_.spacing() * static_cast<double>(i - j)));
    }
    return p;
  }

 private:
  Matrix build_matrix() const {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (scheme_ == KineticScheme::FiniteDifference) return apply_left(Matrix::Identity(n, n));
    // spectral: T = F⁻¹·diag(E)·F, one column at a time
    Matrix t(n, n);
    Dft dft(grid_.size());
    std::vector<cplx> col(grid_.size());
    for (Eigen::Index j = 0; j < n; ++j) {
      std::fill(col.begin(), col.end(), cplx(0.0));
      col[static_cast<std::size_t>(j)] = 1.0;
      dft.forward(col);
      for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] *= energies_(i);
      dft.inverse(col);
      for (Eigen::Index i = 0; i < n; ++i) t(i, j) = col[static_cast<std::size_t>(i)];
    }
    return t;
  }

  SpatialGrid grid_;
  double hbar_ = 1.0;
  KineticScheme scheme_ = KineticScheme::FiniteDifference;
  Eigen::VectorXd energies_;
  Matrix matrix_;
  Eigen::MatrixXd real_;
};

}  // namespace qcsim
