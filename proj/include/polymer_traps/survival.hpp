#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "polymer_traps/initial_profile.hpp"
#include "polymer_traps/she_solver.hpp"

namespace polymer_traps {

/// Model and discretization of one survival run.
struct SurvivalConfig {
  int d = 2;
  double T = 1.0;
  double J = 8.0;
  double nu = 1.0;
  double a = 0.3;
  Eigen::Index n_x = 0;       // 0 picks the smallest power of two with J / n_x <= a / 8
  Eigen::Index n_t = 64;
  Eigen::Index n_modes = -1;  // < 0: grid Nyquist
  double voxel_edge = 0.0;    // <= 0: a / 16
  bool frozen = false;        // zero profile and zero noise
  int workers = 1;

  Eigen::Index grid_points() const;
  double voxel() const { return voxel_edge > 0.0 ? voxel_edge : a / 16.0; }
  /// Throws ConfigurationError naming the offending field.
  void validate() const;
};

/// Path p uses derive_stream(master_seed, first_replica + p, purpose).
struct StreamSeeds {
  std::uint64_t master_seed = 0;
  std::uint64_t first_replica = 0;
};

enum class EstimatorKind { kDirect, kSausage, kCertificate };

const char* to_string(EstimatorKind kind);

struct SurvivalEstimate {
  EstimatorKind kind = EstimatorKind::kSausage;
  double mean = 0.0;
  double standard_error = 0.0;
  Eigen::Index replicas = 0;
  int d = 0;
  double T = 0.0;
  double J = 0.0;
  double nu = 0.0;
  double a = 0.0;
};

/// Error for comparing two estimates: sqrt(se1^2 + se2^2).
double combined_error(const SurvivalEstimate& x, const SurvivalEstimate& y);

/// Bridge profile plus spectral solve for path p.
StringPath sample_path(const SurvivalConfig& cfg, const StreamSeeds& seeds, std::uint64_t p);

/// Fraction of (path, trap field) pairs that survive. The standard error treats each
/// path's fields as one cluster; with one field per path it is the binomial error.
SurvivalEstimate estimate_direct(const SurvivalConfig& cfg, Eigen::Index n_paths,
                                 Eigen::Index n_fields_per_path, const StreamSeeds& seeds);

/// Mean over paths of exp(-nu |sausage|), voxel volumes.
SurvivalEstimate estimate_sausage(const SurvivalConfig& cfg, Eigen::Index n_paths,
                                  const StreamSeeds& seeds);

struct ScaledParams {
  int d = 0;
  double T = 1.0;
  double J = 0.0;
  double nu = 0.0;
  double a = 0.0;
};

/// (T, J, nu, a) -> (1, J / sqrt(T), nu T^(d/4), a / T^(1/4)).
ScaledParams scaling_map(int d, double T, double J, double nu, double a);
/// Inverse of scaling_map for a given T.
ScaledParams unscale(const ScaledParams& scaled, double T);

/// Config with the scaled parameters and the same grid sizes.
SurvivalConfig scaled_config(const SurvivalConfig& cfg);

/// P(sup |u| <= alpha_ball) * exp(-nu c_d (alpha_ball + a)^d).
SurvivalEstimate confinement_certificate(const SurvivalConfig& cfg, double alpha_ball,
                                         Eigen::Index n_paths, const StreamSeeds& seeds);

struct CertificateSweep {
  std::vector<double> alpha_balls;
  std::vector<SurvivalEstimate> estimates;
  std::size_t best = 0;
};

/// Log-spaced alpha_ball grid centred at (J / nu)^(1/(d+2)), spanning a factor `spread`
/// either side; nu = 0 centres at J^(1/(d+2)).
std::vector<double> certificate_grid(const SurvivalConfig& cfg, int points = 8,
                                     double spread = 3.0);

/// Certificate on every grid value from one set of paths; `best` is the argmax.
CertificateSweep optimize_certificate(const SurvivalConfig& cfg, const std::vector<double>& grid,
                                      Eigen::Index n_paths, const StreamSeeds& seeds);

struct ExponentFit {
  double p_hat = 0.0;
  double c_hat = 0.0;
  double residual = 0.0;  // sum of squared (weighted) residuals
};

/// Least squares of log(-log S) on log(J / sqrt(T)). With `stderrs`, each point is
/// weighted by its delta-method variance.
ExponentFit fit_exponent(const std::vector<double>& J_list, const std::vector<double>& means,
                         double T, const std::vector<double>* stderrs = nullptr);

/// Target exponent d / (d + 2).
inline double target_exponent(int d) { return static_cast<double>(d) / (d + 2.0); }

}  // namespace polymer_traps
