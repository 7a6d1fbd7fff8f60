#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "polymer_traps/diagnostics.hpp"
#include "polymer_traps/errors.hpp"
#include "polymer_traps/she_solver.hpp"

using namespace polymer_traps;

TEST_CASE("straight line kappa1") {
  const InitialProfile line = straight_line_profile(2, 64.0, 1024);
  const KappaRecord rec = kappa_sequences(line, 1.0, 0.25, default_c0(64.0, 0.25), 0.3, 0.5);
  REQUIRE(rec.kappa1.size() == 16);
  for (std::size_t i = 0; i < rec.kappa1.size(); ++i) CHECK(rec.kappa1[i] == 4.0 * (i + 1));
  for (double L : {8.0, 17.0, 32.0}) {
    const KappaRecord r = kappa_sequences(line, 1.0, 0.25, 1.0, 0.3, L / 64.0);
    CHECK(r.n1 == static_cast<Eigen::Index>(std::floor(L / 4.0)));
  }
  CHECK(verify_kappa(rec, line).ok);
}

TEST_CASE("constant profile has no separation times") {
  const InitialProfile flat{2, 32.0, Eigen::MatrixXd::Zero(2, 513)};
  const KappaRecord rec = kappa_sequences(flat, 1.0, 0.5, 1.0, 0.3);
  CHECK(rec.kappa1.empty());
  CHECK(rec.kappa2.empty());
  CHECK(rec.n3 == 0);
  CHECK(verify_kappa(rec, flat).ok);
}

TEST_CASE("kappa preconditions") {
  const InitialProfile line = straight_line_profile(2, 16.0, 256);
  CHECK_THROWS_AS(kappa_sequences(line, 0.5, 0.25, 1.0, 0.3), DomainError);
  CHECK_THROWS_AS(kappa_sequences(line, 1.0, 2.0, 1.0, 0.3), DomainError);
  CHECK_THROWS_AS(kappa_sequences(line, 1.0, 0.0, 1.0, 0.3), DomainError);
}

TEST_CASE("bridge kappa invariants re-verified") {
  RandomStream s = derive_stream(1, 0, StreamPurpose::kInitialProfile);
  for (int i = 0; i < 40; ++i) {
    const InitialProfile p = sample_bridge(2, 64.0, 4096, s);
    const KappaRecord rec = kappa_sequences(p, 1.0, 0.5, default_c0(64.0, 0.5), 1.0);
    const KappaCheck check = verify_kappa(rec, p);
    for (const auto& v : check.violations) INFO(v);
    CHECK(check.ok);
    CHECK(rec.n3 <= rec.n2);
    if (rec.kappa1.size() > 0) CHECK(check.min_separation >= 4.0 - 2.0 * rec.modulus);
    CHECK(rec.lambda.size() == static_cast<std::size_t>(std::max<Eigen::Index>(rec.n3 - 1, 0)));
    for (double x : rec.kappa2) {
      CHECK(x > rec.kappa2_origin);
      CHECK(x <= 0.75 * 0.5 * 64.0);
    }
  }
}

TEST_CASE("N3 shrinks as confinement tightens") {
  RandomStream s = derive_stream(2, 0, StreamPurpose::kInitialProfile);
  for (int i = 0; i < 30; ++i) {
    const InitialProfile p = sample_bridge(1, 64.0, 8192, s);
    const Eigen::Index wide = kappa_sequences(p, 1.0, 0.5, 0.05, 1.0).n3;
    const Eigen::Index longer = kappa_sequences(p, 1.0, 0.5, 0.2, 1.0).n3;
    const Eigen::Index tighter = kappa_sequences(p, 1.0, 0.5, 0.05, 0.5).n3;
    CHECK(longer <= wide);
    CHECK(tighter <= wide);
  }
}

TEST_CASE("separation counts grow with J") {
  RandomStream s = derive_stream(3, 0, StreamPurpose::kInitialProfile);
  std::vector<double> n16, n64;
  for (int i = 0; i < 500; ++i) {
    n16.push_back(static_cast<double>(kappa_sequences(sample_bridge(2, 16.0, 512, s), 1.0, 0.25, 0.1, 0.3).n1));
    n64.push_back(static_cast<double>(kappa_sequences(sample_bridge(2, 64.0, 2048, s), 1.0, 0.25, 0.1, 0.3).n1));
  }
  const double scale = std::pow(64.0 / 16.0, 0.5) / 2.0;
  CHECK(oracle::percentile(n64, 0.05) >= scale * oracle::percentile(n16, 0.05));
}

TEST_CASE("box counting on smooth sets") {
  Eigen::MatrixXd seg(3, 200000);
  for (Eigen::Index i = 0; i < seg.cols(); ++i) seg.col(i) = Eigen::Vector3d(1, 2, 2) / 3.0 * (double(i) / (seg.cols() - 1));
  const auto eps = log_spaced(0.1, 0.002, 8);
  CHECK(minkowski_dimension(seg, eps).slope == doctest::Approx(1.0).epsilon(0.15));

  RandomStream s = derive_stream(4, 0, StreamPurpose::kHitOrMiss);
  Eigen::MatrixXd square(2, 1000000);
  for (Eigen::Index i = 0; i < square.cols(); ++i) square.col(i) << s.uniform(), s.uniform();
  const DimensionEstimate sq = minkowski_dimension(square, log_spaced(0.1, 0.003, 8));
  CHECK(sq.slope == doctest::Approx(2.0).epsilon(0.075));
  for (std::size_t i = 1; i < sq.counts.size(); ++i) CHECK(sq.counts[i] >= sq.counts[i - 1]);
}

TEST_CASE("box counting is invariant under rigid motion") {
  RandomStream s = derive_stream(5, 0, StreamPurpose::kNoise);
  const Eigen::MatrixXd trace = sample_noise_trace(2, 4.0, 0.0, 1.0, 1 << 16, 512, s);
  const auto eps = log_spaced(0.5, 0.5 * std::pow(10.0, -1.5), 8);
  const double base = minkowski_dimension(trace, eps).slope;
  const double angle = 0.7;
  Eigen::Matrix2d rot;
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Eigen::MatrixXd moved = rot * trace;
  moved.colwise() += Eigen::Vector2d(3.3, -1.7);
  CHECK(std::abs(minkowski_dimension(moved, eps).slope - base) < 0.02);
}

TEST_CASE("box counting preconditions") {
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Random(2, 100);
  CHECK_THROWS_AS(minkowski_dimension(pts, {0.1, 0.05, 0.02}), ConfigurationError);
  CHECK_THROWS_AS(minkowski_dimension(pts, {0.1, 0.08, 0.06, 0.05}), ConfigurationError);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Zero(2, 10);
  CHECK_THROWS_AS(minkowski_dimension(one, log_spaced(1.0, 0.01, 5)), NumericalError);
}

TEST_CASE("secterm left side against an independent quadrature") {
  // scipy dblquad values, J = 16, window complement on the circle
  CHECK(secterm_lhs(1.0, 0.4, 0.5, 16.0).value == doctest::Approx(4.358976e-4).epsilon(1e-6));
  CHECK(secterm_lhs(2.0, 0.9, 1.0, 16.0).value == doctest::Approx(1.927545e-5).epsilon(1e-6));
  CHECK(secterm_lhs(1.0, 0.9, 1.0, 16.0).value == doctest::Approx(6.543106e-4).epsilon(1e-6));
  CHECK(secterm_lhs(1.0, 0.49, 0.5, 16.0).value == doctest::Approx(4.89e-6).epsilon(1e-3));
}

TEST_CASE("secterm limits and preconditions") {
  for (double t : {0.2, 0.5, 1.0}) {
    const double lhs = secterm_lhs(1.0, t - 1e-8, t, 16.0).value;
    CHECK(lhs < 1e-6 * std::exp(-1.0 / t));
  }
  CHECK_THROWS_AS(secterm_lhs(0.0, 0.4, 0.5, 16.0), DomainError);
  CHECK_THROWS_AS(secterm_lhs(8.0, 0.4, 0.5, 16.0), DomainError);
  CHECK_THROWS_AS(secterm_lhs(1.0, 0.5, 0.5, 16.0), DomainError);
  CHECK_THROWS_AS(secterm_quadrature_check({0.0}, {{0.4, 0.5}}, 16.0, 4.0), DomainError);
}

TEST_CASE("secterm ratio grid") {
  std::vector<std::pair<double, double>> st;
  for (double t : {0.2, 0.5, 1.0})
    for (double gap : {1e-3, 1e-2, 1e-1}) st.emplace_back(t - gap, t);
  const SectermCheck check = secterm_quadrature_check({1.0, 2.0, 3.0}, st, 16.0, 2.0);
  CHECK(std::isfinite(check.max_ratio));
  CHECK(check.refinement_change < 2.0);
  CHECK(check.max_ratio_by_delta[0] == doctest::Approx(0.0039063).epsilon(1e-4));
  CHECK(check.max_ratio_by_delta[1] == doctest::Approx(0.0018721).epsilon(1e-4));
  CHECK(check.max_ratio_by_delta[2] == doctest::Approx(0.0010477).epsilon(1e-4));
  CHECK(check.max_ratio_by_delta[1] < check.max_ratio_by_delta[0]);
  CHECK(check.max_ratio_by_delta[2] < check.max_ratio_by_delta[1]);
}
