#include "polymer_traps/initial_profile.hpp"

#include <cmath>

#include "polymer_traps/errors.hpp"

namespace polymer_traps {

namespace {

void check_grid(int d, double J, Eigen::Index n_x) {
  if (d < 1) throw DomainError("initial profile: d must be >= 1");
  if (!(J > 0.0)) throw DomainError("initial profile: J must be positive");
  if (n_x < 2) throw ConfigurationError("initial profile: n_x must be >= 2");
}

}  // namespace

InitialProfile sample_bridge(int d, double J, Eigen::Index n_x, RandomStream& stream) {
  check_grid(d, J, n_x);
  InitialProfile p{d, J, Eigen::MatrixXd::Zero(d, n_x + 1)};
  const double h = J / static_cast<double>(n_x);
  for (Eigen::Index k = 0; k + 1 < n_x; ++k) {
    // Remaining lengths counted in steps keep the ratios exact at the far end.
    const double rem = static_cast<double>(n_x - k);
    const double shrink = (rem - 1.0) / rem;
    const double sd = std::sqrt(h * shrink);
    for (int c = 0; c < d; ++c) p.values(c, k + 1) = p.values(c, k) * shrink + sd * stream.normal();
  }
  return p;
}

InitialProfile sample_brownian(int d, double J, Eigen::Index n_x, RandomStream& stream) {
  check_grid(d, J, n_x);
  InitialProfile p{d, J, Eigen::MatrixXd::Zero(d, n_x + 1)};
  const double sd = std::sqrt(J / static_cast<double>(n_x));
  for (Eigen::Index k = 0; k < n_x; ++k)
    for (int c = 0; c < d; ++c) p.values(c, k + 1) = p.values(c, k) + sd * stream.normal();
  return p;
}

InitialProfile straight_line_profile(int d, double J, Eigen::Index n_x, double speed) {
  check_grid(d, J, n_x);
  InitialProfile p{d, J, Eigen::MatrixXd::Zero(d, n_x + 1)};
  for (Eigen::Index k = 0; k <= n_x; ++k) p.values(0, k) = speed * p.position(k);
  return p;
}

BridgeSdeCheck sde_bridge_step_check(const InitialProfile& profile) {
  const Eigen::Index n = profile.n_x();
  const double h = profile.spacing();
  BridgeSdeCheck out;
  out.driving_increments.resize(profile.d, n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double remaining = profile.J - profile.position(k);
    out.driving_increments.col(k) = profile.values.col(k + 1) - profile.values.col(k) +
                                    profile.values.col(k) * (h / remaining);
  }
  const double count = static_cast<double>(out.driving_increments.size());
  out.mean = out.driving_increments.sum() / count;
  out.variance_ratio = out.driving_increments.squaredNorm() / count / h;
  out.discrepancy = std::abs(out.variance_ratio - 1.0) + std::abs(out.mean) / std::sqrt(h);
  return out;
}

GirsanovWeight girsanov_log_weight(const InitialProfile& profile, double alpha) {
  if (!(alpha > 0.0) || alpha >= 1.0)
    throw DomainError("girsanov_log_weight: alpha must lie in (0, 1)");
  const double h = profile.spacing();
  const double limit = alpha * profile.J;
  double stochastic = 0.0;
  double quadratic = 0.0;
  for (Eigen::Index k = 0; k < profile.n_x() && profile.position(k) < limit; ++k) {
    const double remaining = profile.J - profile.position(k);
    const auto x = profile.values.col(k);
    const Eigen::VectorXd dB = profile.values.col(k + 1) - x + x * (h / remaining);
    stochastic += x.dot(dB) / remaining;
    quadratic += x.squaredNorm() * h / (remaining * remaining);
  }
  return {alpha, stochastic - 0.5 * quadratic};
}

}  // namespace polymer_traps
