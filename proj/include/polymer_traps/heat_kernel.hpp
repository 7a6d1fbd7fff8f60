#pragma once

// Heat kernels on the line and on the circle [0, J) with endpoints identified,
// and the periodic heat semigroup acting on sampled profiles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/fft.hpp"

namespace polymer_traps {

template <typename Scalar = double>
struct KernelParams {
  Scalar J = Scalar(1);
  Scalar truncation_tol = Scalar(1e-12);

  void validate() const {
    if (!(J > Scalar(0))) throw DomainError("KernelParams: J must be positive");
    if (!(truncation_tol > Scalar(0)))
      throw DomainError("KernelParams: truncation_tol must be positive");
  }
};

/// p(t, x) = (2 pi t)^{-1/2} exp(-x^2 / (2t)).
template <typename Scalar>
Scalar gaussian_kernel(Scalar t, Scalar x) {
  if (!(t > Scalar(0))) throw DomainError("gaussian_kernel: t must be positive");
  using std::exp;
  using std::sqrt;
  return exp(-x * x / (Scalar(2) * t)) / sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * t);
}

/// Radius beyond which the Gaussian tail is below `tol`.
template <typename Scalar>
Scalar gaussian_tail_radius(Scalar t, Scalar tol) {
  using std::log;
  using std::sqrt;
  const Scalar arg = Scalar(1) / (tol * sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * t));
  if (arg <= Scalar(1)) return Scalar(0);
  return sqrt(Scalar(2) * t * log(arg));
}

/// Number of images on each side kept in the periodic sum: every n with
/// |x + nJ| <= tail_radius + J is retained, for x reduced into [0, J).
template <typename Scalar>
int image_count(Scalar t, const KernelParams<Scalar>& params) {
  const Scalar reach = gaussian_tail_radius(t, params.truncation_tol) + params.J;
  return static_cast<int>(std::ceil(reach / params.J)) + 1;
}

template <typename Scalar>
Scalar reduce_periodic(Scalar x, Scalar J) {
  using std::floor;
  Scalar r = x - J * floor(x / J);
  if (r >= J) r -= J;
  return r;
}

/// Representative of x modulo J in [-J/2, J/2].
template <typename Scalar>
Scalar minimal_image(Scalar x, Scalar J) {
  Scalar r = reduce_periodic(x, J);
  if (r > J / Scalar(2)) r -= J;
  return r;
}

/// G(t, x) = sum_n p(t, x + nJ), truncated so the omitted images are below tolerance.
template <typename Scalar>
Scalar periodic_kernel(Scalar t, Scalar x, const KernelParams<Scalar>& params) {
  if (!(t > Scalar(0))) throw DomainError("periodic_kernel: t must be positive");
  params.validate();
  const Scalar xr = reduce_periodic(x, params.J);
  const Scalar reach = gaussian_tail_radius(t, params.truncation_tol) + params.J;
  const int n_max = image_count(t, params);
  Scalar sum = Scalar(0);
  // Sum from the far images inward so the dominant terms are added last.
  for (int n = n_max; n >= 1; --n) {
    for (int sign : {-1, 1}) {
      const Scalar z = xr + Scalar(sign * n) * params.J;
      if (std::abs(z) <= reach) sum += gaussian_kernel(t, z);
    }
  }
  return sum + gaussian_kernel(t, xr);
}

/// Decay rate of Fourier mode k on the circle: (1/2) (2 pi k / J)^2.
template <typename Scalar>
Scalar mode_rate(Eigen::Index k, Scalar J) {
  const Scalar w = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / J;
  return Scalar(0.5) * w * w;
}

/// (G_t * f)(x_j) for every grid point, f sampled on x_j = j J / n_x.
///
/// `profile` holds one coordinate per row and one grid point per column. The
/// convolution acts in Fourier space, multiplying mode k by exp(-mode_rate(k) t).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> convolve_profile(
    const Eigen::MatrixBase<Derived>& profile, typename Derived::Scalar t,
    const KernelParams<typename Derived::Scalar>& params) {
  using Scalar = typename Derived::Scalar;
  using Complex = std::complex<Scalar>;
  params.validate();
  const Eigen::Index n = profile.cols();
  if (n < 8) throw ConfigurationError("convolve_profile: grid needs at least 8 points");
  if (t < Scalar(0)) throw DomainError("convolve_profile: t must be non-negative");

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = profile;
  if (t == Scalar(0)) return out;

  RealFft<Scalar> fft(n);
  std::vector<Scalar> row(static_cast<std::size_t>(n));
  std::vector<Complex> spec(static_cast<std::size_t>(fft.half_size()));
  std::vector<Scalar> decay(spec.size());
  for (std::size_t k = 0; k < decay.size(); ++k)
    decay[k] = std::exp(-mode_rate(static_cast<Eigen::Index>(k), params.J) * t);

  for (Eigen::Index c = 0; c < profile.rows(); ++c) {
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = profile(c, j);
    fft.forward(row, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= decay[k] / Scalar(n);
    fft.inverse(spec, row);
    for (Eigen::Index j = 0; j < n; ++j) out(c, j) = row[static_cast<std::size_t>(j)];
  }
  return out;
}

/// Largest ratio G(t, z) / p(t, z) over the given times and a uniform grid of
/// n_y offsets y in [0, J], with z the minimal periodic image of x - y and x
/// scanning [alpha_star J / 4, 3 alpha_star J / 4].
template <typename Scalar>
Scalar kernel_domination_constant(const KernelParams<Scalar>& params, Scalar alpha_star,
                                  const std::vector<Scalar>& times, int n_x, int n_y) {
  params.validate();
  Scalar worst = Scalar(0);
  const Scalar lo = alpha_star * params.J / Scalar(4);
  const Scalar hi = Scalar(3) * alpha_star * params.J / Scalar(4);
  for (Scalar t : times) {
    for (int i = 0; i <= n_x; ++i) {
      const Scalar x = lo + (hi - lo) * Scalar(i) / Scalar(std::max(n_x, 1));
      for (int k = 0; k <= n_y; ++k) {
        const Scalar y = params.J * Scalar(k) / Scalar(n_y);
        const Scalar z = minimal_image(x - y, params.J);
        const Scalar p = gaussian_kernel(t, z);
        if (p <= Scalar(0)) continue;
        worst = std::max(worst, periodic_kernel(t, z, params) / p);
      }
    }
  }
  return worst;
}

}  // namespace polymer_traps
