#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace qcsim {

using cplx = std::complex<double>;

/// Thin unnormalized DFT wrapper: forward X_k = Σ x_m e^{−2πikm/n},
/// inverse x_m = (1/n) Σ X_k e^{+2πikm/n}. Instances own their plans, so use
/// one per thread.
class Dft {
 public:
  explicit Dft(std::size_t n) : n_(n), in_(n), out_(n) {
    fft_.SetFlag(Eigen::FFT<double>::Unscaled);
  }

  std::size_t size() const { return n_; }

  void forward(std::vector<cplx>& x) {
    fft_.fwd(out_, x);
    x.swap(out_);
  }
  void inverse(std::vector<cplx>& x) {
    fft_.inv(out_, x);
    const double s = 1.0 / static_cast<double>(n_);
    for (auto& v : out_) v *= s;
    x.swap(out_);
  }

 private:
  std::size_t n_;
  std::vector<cplx> in_, out_;
  Eigen::FFT<double> fft_;
};

/// Angular wavenumber of DFT bin k on a periodic grid of n points and spacing dx,
/// in the symmetric range [−π/dx, π/dx).
inline double wavenumber(std::size_t k, std::size_t n, double dx) {
  const auto kk = static_cast<long>(k);
  const auto nn = static_cast<long>(n);
  const long s = kk < (nn + 1) / 2 ? kk : kk - nn;
  return 2.0 * std::numbers::pi * static_cast<double>(s) / (static_cast<double>(n) * dx);
}

}  // namespace qcsim
