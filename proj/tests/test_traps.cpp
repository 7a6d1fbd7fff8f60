#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "polymer_traps/errors.hpp"
#include "polymer_traps/sausage.hpp"
#include "polymer_traps/spatial_hash.hpp"
#include "polymer_traps/traps.hpp"

using namespace polymer_traps;

namespace {

Box unit_square() { return {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)}; }

bool killed_all_pairs(const Eigen::MatrixXd& points, const TrapField& field) {
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    for (Eigen::Index k = 0; k < field.count(); ++k)
      if ((points.col(i) - field.points.col(k)).norm() <= field.a) return true;
  return false;
}

Eigen::MatrixXd random_walk(int d, Eigen::Index n, double step, RandomStream& s) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, n);
  for (Eigen::Index i = 1; i < n; ++i)
    for (int c = 0; c < d; ++c) w(c, i) = w(c, i - 1) + step * s.normal();
  return w;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("poisson count mean and dispersion") {
  RandomStream s = derive_stream(1, 0, StreamPurpose::kTraps);
  std::vector<double> counts;
  for (int i = 0; i < 10000; ++i) {
    const TrapField f = sample_traps(unit_square(), 2.0, 0.1, s);
    counts.push_back(static_cast<double>(f.count()));
    for (Eigen::Index k = 0; k < f.count(); ++k) {
      REQUIRE(f.points(0, k) >= 0.0);
      REQUIRE(f.points(1, k) <= 1.0);
    }
  }
  const auto m = oracle::mean_error(counts);
  CHECK(std::abs(m.mean - 2.0) < 3.0 * m.se);
  double var = 0;
  for (double c : counts) var += (c - m.mean) * (c - m.mean);
  var /= counts.size() - 1;
  // variance of the sample variance of a Poisson(2) count is about (2 + 2 * 4) / n
  CHECK(std::abs(var - m.mean) < 5.0 * std::sqrt(10.0 / counts.size()));
}

TEST_CASE("tiny box holds no traps") {
  RandomStream s = derive_stream(2, 0, StreamPurpose::kTraps);
  const Box tiny{Eigen::Vector2d(0, 0), Eigen::Vector2d(1e-7, 1e-7)};
  CHECK(sample_traps(tiny, 1.0, 0.1, s).count() == 0);
  const Box flat{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)};
  CHECK_THROWS_AS(sample_traps(flat, 1.0, 0.1, s), DomainError);
  CHECK_THROWS_AS(sample_traps(unit_square(), 0.0, 0.1, s), DomainError);
}

TEST_CASE("kill at 0.9a, survive at 1.1a") {
  const double a = 0.5;
  const Eigen::MatrixXd path = Eigen::MatrixXd::Zero(2, 10);
  const Box box = Box::around(path, 2.0);
  TrapField near{2, 1.0, a, box, Eigen::MatrixXd(2, 1)};
  near.points << 0.9 * a, 0.0;
  CHECK(is_killed(path, near));
  TrapField far = near;
  far.points << 0.0, 1.1 * a;
  CHECK_FALSE(is_killed(path, far));
}

TEST_CASE("coverage violation is an error") {
  const Eigen::MatrixXd path = Eigen::MatrixXd::Zero(2, 3);
  const Box small{Eigen::Vector2d(-0.1, -0.1), Eigen::Vector2d(0.1, 0.1)};
  TrapField f{2, 1.0, 0.5, small, Eigen::MatrixXd(2, 0)};
  CHECK_THROWS_AS(is_killed(path, f), CoverageError);
}

TEST_CASE("spatial hash agrees with all pairs") {
  RandomStream s = derive_stream(3, 0, StreamPurpose::kTraps);
  int disagreements = 0, kills = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 3;
    const double a = 0.1 + 0.4 * s.uniform();
    const Eigen::MatrixXd path = random_walk(d, 200, 0.1, s);
    const TrapField f = sample_traps(Box::around(path, a), 0.5 + 3.0 * s.uniform(), a, s);
    const bool fast = is_killed(path, f);
    disagreements += fast != killed_all_pairs(path, f);
    kills += fast;
  }
  CHECK(disagreements == 0);
  CHECK(kills > 0);
  CHECK(kills < 100);
}

TEST_CASE("spatial hash candidate lookup") {
  RandomStream s = derive_stream(4, 0, StreamPurpose::kTraps);
  const Eigen::MatrixXd pts = random_walk(3, 500, 0.3, s);
  const SpatialHash hash(pts, 0.4);
  CHECK(hash.size() == 500);
  for (int q = 0; q < 200; ++q) {
    const Eigen::Vector3d query = pts.col(q) + Eigen::Vector3d(s.normal(), s.normal(), s.normal()) * 0.3;
    bool brute = false;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) brute = brute || (pts.col(i) - query).norm() <= 0.25;
    CHECK(hash.any_within(query, 0.25) == brute);
  }
}

TEST_CASE("enlarging a or nu never rescues a killed path") {
  RandomStream s = derive_stream(5, 0, StreamPurpose::kTraps);
  for (int i = 0; i < 50; ++i) {
    const Eigen::MatrixXd path = random_walk(2, 100, 0.1, s);
    const TrapField f = sample_traps(Box::around(path, 0.6), 1.0, 0.3, s);
    TrapField bigger = f;
    bigger.a = 0.6;
    if (is_killed(path, f)) CHECK(is_killed(path, bigger));
  }
}

TEST_CASE("closed-form survival") {
  CHECK(survival_given_path_closed_form(0.0, 3.0) == 1.0);
  CHECK(survival_given_path_closed_form(5.0, 0.0) == 1.0);
  CHECK(survival_given_path_closed_form(std::numbers::pi * 0.25, 2.0) == doctest::Approx(std::exp(-2.0 * std::numbers::pi * 0.25)));
  CHECK_THROWS_AS(survival_given_path_closed_form(-1.0, 1.0), DomainError);
}

TEST_CASE("kill frequency over fresh fields matches exp(-nu |sausage|)") {
  RandomStream s = derive_stream(6, 0, StreamPurpose::kTraps);
  const Eigen::MatrixXd path = random_walk(2, 300, 0.05, s);
  const double a = 0.2, nu = 1.5;
  const Box box = Box::around(path, a);
  std::vector<double> alive;
  for (int i = 0; i < 20000; ++i) alive.push_back(is_killed(path, sample_traps(box, nu, a, s)) ? 0.0 : 1.0);
  const auto m = oracle::mean_error(alive);
  const double volume = sausage_volume_voxel(path, a, a / 64.0).volume;
  CHECK(std::abs(m.mean - std::exp(-nu * volume)) < 3.0 * m.se + 0.005);
}
