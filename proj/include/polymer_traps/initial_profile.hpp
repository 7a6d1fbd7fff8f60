#pragma once

#include <Eigen/Core>

#include "polymer_traps/random.hpp"

namespace polymer_traps {

/// Brownian bridge on [0, J] sampled on n_x + 1 uniform nodes, pinned to 0 at both ends.
/// Columns are grid nodes, rows are coordinates.
struct InitialProfile {
  int d = 1;
  double J = 1.0;
  Eigen::MatrixXd values;  // d x (n_x + 1)

  Eigen::Index n_x() const { return values.cols() - 1; }
  double spacing() const { return J / static_cast<double>(n_x()); }
  double position(Eigen::Index k) const { return J * static_cast<double>(k) / static_cast<double>(n_x()); }
  /// Values on the periodic grid x_0 .. x_{n_x - 1} (the last node is identified with the first).
  auto periodic_values() const { return values.leftCols(n_x()); }
};

/// Exact bridge law on the grid via sequential conditional Gaussians.
InitialProfile sample_bridge(int d, double J, Eigen::Index n_x, RandomStream& stream);

/// Standard Brownian motion on the same grid (the law the bridge is compared to).
InitialProfile sample_brownian(int d, double J, Eigen::Index n_x, RandomStream& stream);

/// Deterministic straight line X_x = x * direction / |direction| * speed, for test inputs.
InitialProfile straight_line_profile(int d, double J, Eigen::Index n_x, double speed = 1.0);

struct BridgeSdeCheck {
  Eigen::MatrixXd driving_increments;  // d x (n_x - 1), the reconstructed dB_k
  double mean = 0.0;                   // sample mean of all increment entries
  double variance_ratio = 0.0;         // sample second moment / h
  double discrepancy = 0.0;            // |variance_ratio - 1| + |mean| / sqrt(h)
};

/// Inverts X_{k+1} = X_k - X_k h / (J - x_k) + dB_k for the driving increments and
/// tests them for the N(0, h) law. The final step is excluded: the drift is singular
/// there and the increment is pinned.
BridgeSdeCheck sde_bridge_step_check(const InitialProfile& profile);

struct GirsanovWeight {
  double alpha = 0.0;
  double log_Z = 0.0;
};

/// log Z_{alpha J} = sum X_k . dB_k / (J - x_k) - 1/2 sum |X_k|^2 h / (J - x_k)^2 over
/// nodes with x_k < alpha J, left-point (Ito) sums, dB reconstructed from the path.
GirsanovWeight girsanov_log_weight(const InitialProfile& profile, double alpha);

}  // namespace polymer_traps
