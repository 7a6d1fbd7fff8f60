#pragma once

#include <complex>
#include <span>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace polymer_traps {

/// Unscaled real-to-half-spectrum transform pair on a fixed length.
///
/// forward: X_k = sum_j x_j exp(-2 pi i j k / n), k = 0..n/2.
/// inverse: x_j = sum_{k=0}^{n-1} X_k exp(+2 pi i j k / n), with the upper
/// half of the spectrum filled by conjugate symmetry.
///
/// Not thread-safe: the underlying plan cache is mutable. Keep one per worker.
template <typename Scalar>
class RealFft {
 public:
  using Complex = std::complex<Scalar>;

  explicit RealFft(Eigen::Index n) : n_(n) {
    fft_.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum);
    fft_.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  }

  Eigen::Index size() const { return n_; }
  Eigen::Index half_size() const { return n_ / 2 + 1; }

  void forward(std::span<const Scalar> in, std::span<Complex> out) {
    fft_.fwd(out.data(), in.data(), n_);
  }

  void inverse(std::span<const Complex> in, std::span<Scalar> out) {
    fft_.inv(out.data(), in.data(), n_);
  }

 private:
  Eigen::Index n_;
  Eigen::FFT<Scalar> fft_;
};

}  // namespace polymer_traps
