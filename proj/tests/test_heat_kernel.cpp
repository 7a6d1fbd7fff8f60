#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/heat_kernel.hpp"

using namespace polymer_traps;

TEST_CASE("gaussian kernel values") {
  CHECK(gaussian_kernel(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(gaussian_kernel(1.0, 1.0) == gaussian_kernel(1.0, -1.0));
  // 40-digit evaluation of (pi/2)^(-1/2) e^(-1/2)
  CHECK(std::abs(gaussian_kernel(0.25, 0.5) - 0.4839414490382866995956604) < 1e-15);
  CHECK_THROWS_AS(gaussian_kernel(0.0, 0.1), DomainError);
  CHECK_THROWS_AS(gaussian_kernel(-1.0, 0.1), DomainError);
}

TEST_CASE("periodic kernel normalization and symmetry") {
  const KernelParams<double> p{4.0};
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += periodic_kernel(0.5, 4.0 * i / n, p);
  CHECK(std::abs(sum * 4.0 / n - 1.0) <= 10.0 * p.truncation_tol);

  // theta-series value with 101 images in 25-digit arithmetic
  CHECK(periodic_kernel(0.5, 1.0, p) == doctest::Approx(0.2076233752441061588628838).epsilon(1e-13));

  const KernelParams<double> q{8.0};
  CHECK(std::abs(periodic_kernel(0.01, 4.0, q) - gaussian_kernel(0.01, 4.0)) < q.truncation_tol);
  for (double x : {0.1, 0.7, 1.9, 3.3})
    CHECK(periodic_kernel(0.3, x, p) == doctest::Approx(periodic_kernel(0.3, 4.0 - x, p)).epsilon(1e-13));
  CHECK(periodic_kernel(0.3, 1.1, p) == doctest::Approx(periodic_kernel(0.3, 5.1, p)).epsilon(1e-13));
  CHECK(periodic_kernel(0.3, 1.1, p) >= gaussian_kernel(0.3, 1.1));
  CHECK_THROWS_AS(periodic_kernel(0.0, 1.0, p), DomainError);
}

TEST_CASE("image truncation drops only terms below tolerance") {
  const KernelParams<double> p{4.0, 1e-12};
  for (double t : {0.01, 0.5, 1.0}) {
    const double reach = gaussian_tail_radius(t, p.truncation_tol) + p.J;
    // first omitted image on either side
    for (double x : {0.0, 1.0, 3.5}) {
      double nearest_omitted = 1e300;
      for (int n = -100; n <= 100; ++n) {
        const double z = x + n * p.J;
        if (std::abs(z) > reach) nearest_omitted = std::min(nearest_omitted, std::abs(z));
      }
      CHECK(gaussian_kernel(t, nearest_omitted) < p.truncation_tol);
    }
  }
}

TEST_CASE("convolve_profile") {
  const KernelParams<double> p{4.0};
  const int n = 256;
  Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(2, n, 1.7);
  CHECK((convolve_profile(constant, 0.8, p) - constant).cwiseAbs().maxCoeff() < 1e-13);

  Eigen::MatrixXd wave(1, n);
  for (int j = 0; j < n; ++j) wave(0, j) = std::cos(2.0 * std::numbers::pi * j / n);
  CHECK((convolve_profile(wave, 0.0, p) - wave).cwiseAbs().maxCoeff() == 0.0);
  const double factor = std::exp(-0.5 * std::pow(2.0 * std::numbers::pi / 4.0, 2) * 0.5);
  CHECK((convolve_profile(wave, 0.5, p) - factor * wave).cwiseAbs().maxCoeff() < 1e-6);

  Eigen::MatrixXd rough(1, n);
  for (int j = 0; j < n; ++j) rough(0, j) = std::sin(0.37 * j * j) + (j % 7) * 0.1;
  const Eigen::MatrixXd two_step = convolve_profile(convolve_profile(rough, 0.2, p), 0.3, p);
  CHECK((two_step - convolve_profile(rough, 0.5, p)).cwiseAbs().maxCoeff() < 1e-8);

  // against direct quadrature of the periodic kernel on the grid
  const double t = 0.05, h = 4.0 / n;
  const Eigen::MatrixXd smooth = convolve_profile(rough, t, p);
  for (int j : {0, 17, 128}) {
    double direct = 0.0;
    for (int k = 0; k < n; ++k) direct += periodic_kernel(t, (j - k) * h, p) * rough(0, k) * h;
    CHECK(smooth(0, j) == doctest::Approx(direct).epsilon(1e-3));
  }

  CHECK_THROWS_AS(convolve_profile(Eigen::MatrixXd::Zero(1, 7), 0.1, p), ConfigurationError);
}

TEST_CASE("kernel domination constant is finite") {
  const KernelParams<double> p{16.0};
  const double C = kernel_domination_constant<double>(p, 0.25, {0.01, 0.1, 0.5, 1.0}, 20, 400);
  CHECK(std::isfinite(C));
  CHECK(C >= 1.0);
  CHECK(C < 3.0);
}
