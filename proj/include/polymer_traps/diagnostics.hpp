#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "polymer_traps/initial_profile.hpp"

namespace polymer_traps {

/// Stopping positions of the three separation/confinement scans over a profile.
///
/// kappa1 and kappa2 hold the indices i >= 1; their starting points are kappa1_origin
/// (= 0) and kappa2_origin (the first grid node at or after alpha_star J / 4).
struct KappaRecord {
  double J = 0.0;
  double Lambda = 1.0;
  double alpha = 0.0;
  double alpha_star = 0.0;
  double c0 = 0.0;
  double Delta = 0.0;  // c0 sqrt(log J)
  double a = 0.0;

  double kappa1_origin = 0.0;
  double kappa2_origin = 0.0;
  std::vector<double> kappa1;
  std::vector<double> kappa2;  // scanned up to 3 alpha_star J / 4
  std::vector<double> kappa3;
  std::vector<double> lambda;  // kappa3_i + Delta for i = 1 .. N3 - 1

  Eigen::Index n1 = 0;  // kappa1 <= alpha J
  Eigen::Index n2 = 0;
  Eigen::Index n3 = 0;
  Eigen::Index overlaps = 0;  // consecutive kappa3 windows of length 2 Delta that intersect
  double modulus = 0.0;       // max |X_{k+1} - X_k| over the grid
};

/// c0 with 2 c0 sqrt(log J) = alpha_star J / 8.
double default_c0(double J, double alpha_star);

/// Grid scans for kappa1 (from 0), kappa2 (from alpha_star J / 4) and the
/// a/16-confined subsequence kappa3. Distances to earlier stopping values are
/// minimum distances to the finite set of selected points. alpha <= 0 uses alpha_star.
KappaRecord kappa_sequences(const InitialProfile& profile, double Lambda, double alpha_star,
                            double c0, double a, double alpha = 0.0);

struct KappaCheck {
  bool ok = true;
  double min_separation = 0.0;  // smallest pairwise |X| distance among kappa1 points
  bool n2_within_kappa1 = true; // N2 <= number of kappa1 in [alpha_star J/4, 3 alpha_star J/4]
  std::vector<std::string> violations;
};

/// Re-derives every KappaRecord invariant from the profile without reusing the scan.
KappaCheck verify_kappa(const KappaRecord& record, const InitialProfile& profile);

struct DimensionEstimate {
  std::vector<double> epsilons;  // decreasing
  std::vector<double> counts;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Occupied-cell box counting of the columns of `trace`; slope of log N against log(1/eps).
DimensionEstimate minkowski_dimension(const Eigen::Ref<const Eigen::MatrixXd>& trace,
                                      std::vector<double> epsilons);

/// `count` log-spaced scales from eps_max down to eps_min.
std::vector<double> log_spaced(double eps_max, double eps_min, int count);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  Eigen::Index intervals = 0;
};

/// int_0^s int_{Delta <= |z| on the circle} [G_{t-r}(z) - G_{s-r}(z)]^2 dz dr with
/// periodic kernels of period J, by nested adaptive Gauss-Kronrod to relative tolerance.
QuadratureResult secterm_lhs(double Delta, double s, double t, double J, double rel_tol = 1e-8);

/// sqrt(t - s) (|ln(t - s)| + 1) exp(-Delta^2 / t).
double secterm_bound(double Delta, double s, double t);

struct SectermCheck {
  double max_ratio = 0.0;
  double refined_max_ratio = 0.0;
  double refinement_change = 0.0;  // larger / smaller of the two maxima
  std::vector<double> max_ratio_by_delta;
  // ratios[i][j]: Delta_grid[i], st_grid[j]
  std::vector<std::vector<double>> ratios;
};

/// Max over the grid of LHS / bound at rel_tol and again at rel_tol / 100.
/// lambda_pos only locates the window; on the circle the integral does not depend on it.
SectermCheck secterm_quadrature_check(const std::vector<double>& Delta_grid,
                                      const std::vector<std::pair<double, double>>& st_grid,
                                      double J, double lambda_pos, double rel_tol = 1e-6);

}  // namespace polymer_traps
