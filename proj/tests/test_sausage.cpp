#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "polymer_traps/errors.hpp"
#include "polymer_traps/initial_profile.hpp"
#include "polymer_traps/sausage.hpp"

using namespace polymer_traps;

namespace {

Eigen::MatrixXd segment(double L, Eigen::Index n) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) p(0, i) = L * i / n;
  return p;
}

Eigen::MatrixXd brownian_points(int d, Eigen::Index n, double step, RandomStream& s) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, n);
  for (Eigen::Index i = 1; i < n; ++i)
    for (int c = 0; c < d; ++c) w(c, i) = w(c, i - 1) + step * s.normal();
  return w;
}

}  // namespace

TEST_CASE("voxel closed forms") {
  const double r = 1.0, h = r / 64.0;
  CHECK(sausage_volume_voxel(Eigen::MatrixXd::Zero(2, 1), r, h).volume ==
        doctest::Approx(std::numbers::pi).epsilon(0.02));
  Eigen::MatrixXd pair(2, 2);
  pair << 0.0, 4.0 * r, 0.0, 0.0;
  CHECK(sausage_volume_voxel(pair, r, h).volume == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.02));
  const double L = 5.0;
  CHECK(sausage_volume_voxel(segment(L, 2000), r, h).volume ==
        doctest::Approx(2.0 * r * L + std::numbers::pi * r * r).epsilon(0.02));
  CHECK(sausage_volume_voxel(Eigen::MatrixXd::Zero(3, 1), r, h).volume ==
        doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.02));
  CHECK(sausage_volume_voxel(Eigen::MatrixXd::Zero(1, 1), r, h).volume == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("voxel preconditions") {
  CHECK_THROWS_AS(sausage_volume_voxel(Eigen::MatrixXd::Zero(2, 1), 1.0, 0.3), ConfigurationError);
  CHECK_THROWS_AS(sausage_volume_voxel(Eigen::MatrixXd::Zero(2, 0), 1.0, 0.1), DomainError);
  CHECK_NOTHROW(sausage_volume_voxel(Eigen::MatrixXd::Zero(2, 1), 1.0, 0.25));
}

TEST_CASE("voxel monotonicity") {
  RandomStream s = derive_stream(1, 0, StreamPurpose::kHitOrMiss);
  const Eigen::MatrixXd pts = brownian_points(2, 400, 0.1, s);
  const double h = 0.01;
  const double part = sausage_volume_voxel(pts.leftCols(200), 0.2, h).volume;
  const double whole = sausage_volume_voxel(pts, 0.2, h).volume;
  const double wider = sausage_volume_voxel(pts, 0.25, h).volume;
  CHECK(part <= whole);
  CHECK(whole <= wider);
  const double ball = std::numbers::pi * 0.04;
  CHECK(whole >= ball * 0.98);
}

TEST_CASE("voxel refinement converges on a disk") {
  const Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 1);
  double previous_change = 1e300, previous = sausage_volume_voxel(p, 1.0, 1.0 / 8.0).volume;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const double v = sausage_volume_voxel(p, 1.0, h).volume;
    const double change = std::abs(v - std::numbers::pi);
    CHECK(change <= std::max(previous_change, 1e-3));
    previous_change = change;
    previous = v;
  }
  CHECK(previous == doctest::Approx(std::numbers::pi).epsilon(0.005));
}

TEST_CASE("hit-or-miss agrees with voxels") {
  RandomStream s = derive_stream(2, 0, StreamPurpose::kHitOrMiss);
  int outside = 0;
  for (int i = 0; i < 20; ++i) {
    const Eigen::MatrixXd pts = brownian_points(2, 300, 0.1, s);
    const double voxel = sausage_volume_voxel(pts, 0.3, 0.3 / 64).volume;
    const SausageEstimate hom = sausage_volume_hit_or_miss(pts, 0.3, 20000, s);
    outside += std::abs(hom.volume - voxel) > 3.0 * hom.standard_error + 0.005 * voxel;
  }
  CHECK(outside <= 1);

  const SausageEstimate one = sausage_volume_hit_or_miss(Eigen::MatrixXd::Zero(2, 1), 1.0, 100000, s);
  CHECK(std::abs(one.volume - std::numbers::pi) < 3.0 * one.standard_error);
  CHECK_THROWS_AS(sausage_volume_hit_or_miss(Eigen::MatrixXd::Zero(2, 1), 1.0, 999, s), ConfigurationError);
}

TEST_CASE("hit-or-miss error rate") {
  RandomStream s = derive_stream(3, 0, StreamPurpose::kHitOrMiss);
  const Eigen::MatrixXd pts = brownian_points(2, 200, 0.1, s);
  std::vector<double> small, large;
  for (int i = 0; i < 200; ++i) {
    small.push_back(sausage_volume_hit_or_miss(pts, 0.3, 2000, s).volume);
    large.push_back(sausage_volume_hit_or_miss(pts, 0.3, 4000, s).volume);
  }
  auto sd = [](const std::vector<double>& x) {
    const auto m = oracle::mean_error(x);
    return m.se * std::sqrt(static_cast<double>(x.size()));
  };
  CHECK(sd(large) / sd(small) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));

  const double voxel = sausage_volume_voxel(pts, 0.3, 0.3 / 64).volume;
  const auto m = oracle::mean_error(large);
  CHECK(std::abs(m.mean - voxel) < 3.0 * m.se + 0.005 * voxel);
}

TEST_CASE("bridge sausage") {
  const InitialProfile line = straight_line_profile(2, 32.0, 4096);
  CHECK(bridge_sausage_volume(line, 1.0, 0.25, 1.0 / 64).volume ==
        doctest::Approx(2.0 * 8.0 + std::numbers::pi).epsilon(0.02));

  const InitialProfile point{2, 8.0, Eigen::MatrixXd::Zero(2, 9)};
  const double v1 = bridge_sausage_volume(point, 1.0, 0.5, 1.0 / 64).volume;
  const double v2 = bridge_sausage_volume(point, 2.0, 0.5, 1.0 / 64).volume;
  CHECK(v2 / v1 == doctest::Approx(4.0).epsilon(0.03));
  CHECK_THROWS_AS(bridge_sausage_volume(point, 0.5, 0.5), DomainError);

  RandomStream s = derive_stream(4, 0, StreamPurpose::kInitialProfile);
  std::vector<double> small, large;
  for (int i = 0; i < 1000; ++i) {
    small.push_back(bridge_sausage_volume(sample_bridge(2, 8.0, 128, s), 1.0, 0.25).volume);
    large.push_back(bridge_sausage_volume(sample_bridge(2, 64.0, 1024, s), 1.0, 0.25).volume);
  }
  CHECK(oracle::percentile(large, 0.01) > oracle::percentile(small, 0.01));
}
