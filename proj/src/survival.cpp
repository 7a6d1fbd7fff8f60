#include "polymer_traps/survival.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/parallel.hpp"
#include "polymer_traps/sausage.hpp"
#include "polymer_traps/traps.hpp"

namespace polymer_traps {

namespace {

struct MeanError {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanError sample_mean_error(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  MeanError out;
  out.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

SurvivalEstimate make_estimate(EstimatorKind kind, const SurvivalConfig& cfg, double mean,
                               double standard_error, Eigen::Index replicas) {
  SurvivalEstimate est;
  est.kind = kind;
  est.mean = std::clamp(mean, 0.0, 1.0);
  est.standard_error = standard_error;
  est.replicas = replicas;
  est.d = cfg.d;
  est.T = cfg.T;
  est.J = cfg.J;
  est.nu = cfg.nu;
  est.a = cfg.a;
  return est;
}

void require_paths(Eigen::Index n_paths) {
  if (n_paths < 1) throw ConfigurationError("n_paths: must be >= 1");
}

}  // namespace

Eigen::Index SurvivalConfig::grid_points() const {
  if (n_x > 0) return n_x;
  const double needed = std::ceil(8.0 * J / a);
  return static_cast<Eigen::Index>(std::bit_ceil(static_cast<std::uint64_t>(std::max(8.0, needed))));
}

void SurvivalConfig::validate() const {
  if (d < 1) throw ConfigurationError("d: must be >= 1");
  if (!(T > 0.0)) throw ConfigurationError("T: must be > 0");
  if (!(J > 0.0)) throw ConfigurationError("J: must be > 0");
  if (!(nu >= 0.0)) throw ConfigurationError("nu: must be >= 0");
  if (!(a > 0.0) || a > 1.0) throw ConfigurationError("a: must lie in (0, 1]");
  if (n_x < 0) throw ConfigurationError("n_x: must be >= 1");
  if (n_x > 0 && n_x < 8) throw ConfigurationError("n_x: must be >= 8");
  if (J / static_cast<double>(grid_points()) > a / 8.0 * (1.0 + 1e-12))
    throw ConfigurationError("n_x: grid spacing J/n_x must be <= a/8");
  if (n_t < 1) throw ConfigurationError("n_t: must be >= 1");
  if (n_modes == 0) throw ConfigurationError("n_modes: must be >= 1 (or negative for Nyquist)");
  if (voxel_edge > a / 4.0) throw ConfigurationError("voxel_edge: must be <= a/4");
  if (workers < 1) throw ConfigurationError("workers: must be >= 1");
}

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kDirect: return "direct";
    case EstimatorKind::kSausage: return "sausage";
    case EstimatorKind::kCertificate: return "certificate";
  }
  return "unknown";
}

double combined_error(const SurvivalEstimate& x, const SurvivalEstimate& y) {
  return std::hypot(x.standard_error, y.standard_error);
}

StringPath sample_path(const SurvivalConfig& cfg, const StreamSeeds& seeds, std::uint64_t p) {
  const Eigen::Index n_x = cfg.grid_points();
  const std::uint64_t replica = seeds.first_replica + p;
  if (cfg.frozen) {
    InitialProfile flat{cfg.d, cfg.J, Eigen::MatrixXd::Zero(cfg.d, n_x + 1)};
    RandomStream none = RandomStream::zero();
    return solve_spectral(flat, cfg.T, cfg.n_t, cfg.n_modes, none);
  }
  RandomStream profile_stream = derive_stream(seeds.master_seed, replica, StreamPurpose::kInitialProfile);
  RandomStream noise_stream = derive_stream(seeds.master_seed, replica, StreamPurpose::kNoise);
  const InitialProfile profile = sample_bridge(cfg.d, cfg.J, n_x, profile_stream);
  return solve_spectral(profile, cfg.T, cfg.n_t, cfg.n_modes, noise_stream);
}

SurvivalEstimate estimate_direct(const SurvivalConfig& cfg, Eigen::Index n_paths,
                                 Eigen::Index n_fields_per_path, const StreamSeeds& seeds) {
  cfg.validate();
  require_paths(n_paths);
  if (n_fields_per_path < 1) throw ConfigurationError("n_fields_per_path: must be >= 1");
  std::vector<double> per_path(static_cast<std::size_t>(n_paths), 1.0);
  if (cfg.nu > 0.0) {
    parallel_for(n_paths, cfg.workers, [&](std::int64_t p) {
      const StringPath path = sample_path(cfg, seeds, static_cast<std::uint64_t>(p));
      const Box box = Box::around(path.values, cfg.a);
      RandomStream trap_stream =
          derive_stream(seeds.master_seed, seeds.first_replica + p, StreamPurpose::kTraps);
      Eigen::Index alive = 0;
      for (Eigen::Index f = 0; f < n_fields_per_path; ++f) {
        const TrapField field = sample_traps(box, cfg.nu, cfg.a, trap_stream);
        if (!is_killed(path, field)) ++alive;
      }
      per_path[p] = static_cast<double>(alive) / static_cast<double>(n_fields_per_path);
    });
  }
  const MeanError me = sample_mean_error(per_path);
  return make_estimate(EstimatorKind::kDirect, cfg, me.mean, me.standard_error,
                       n_paths * n_fields_per_path);
}

SurvivalEstimate estimate_sausage(const SurvivalConfig& cfg, Eigen::Index n_paths,
                                  const StreamSeeds& seeds) {
  cfg.validate();
  require_paths(n_paths);
  std::vector<double> weights(static_cast<std::size_t>(n_paths), 1.0);
  if (cfg.nu > 0.0) {
    parallel_for(n_paths, cfg.workers, [&](std::int64_t p) {
      const StringPath path = sample_path(cfg, seeds, static_cast<std::uint64_t>(p));
      const SausageEstimate volume = sausage_volume_voxel(path.values, cfg.a, cfg.voxel());
      weights[p] = survival_given_path_closed_form(volume.volume, cfg.nu);
    });
  }
  const MeanError me = sample_mean_error(weights);
  return make_estimate(EstimatorKind::kSausage, cfg, me.mean, me.standard_error, n_paths);
}

ScaledParams scaling_map(int d, double T, double J, double nu, double a) {
  if (!(T > 0.0)) throw DomainError("scaling_map: T must be > 0");
  ScaledParams out;
  out.d = d;
  out.T = 1.0;
  out.J = J / std::sqrt(T);
  out.nu = nu * std::pow(T, 0.25 * d);
  out.a = a / std::pow(T, 0.25);
  return out;
}

ScaledParams unscale(const ScaledParams& scaled, double T) {
  if (!(T > 0.0)) throw DomainError("unscale: T must be > 0");
  ScaledParams out;
  out.d = scaled.d;
  out.T = T * scaled.T;
  out.J = scaled.J * std::sqrt(T);
  out.nu = scaled.nu / std::pow(T, 0.25 * scaled.d);
  out.a = scaled.a * std::pow(T, 0.25);
  return out;
}

SurvivalConfig scaled_config(const SurvivalConfig& cfg) {
  const ScaledParams s = scaling_map(cfg.d, cfg.T, cfg.J, cfg.nu, cfg.a);
  SurvivalConfig out = cfg;
  out.n_x = cfg.grid_points();
  out.T = s.T;
  out.J = s.J;
  out.nu = s.nu;
  out.a = s.a;
  if (cfg.voxel_edge > 0.0) out.voxel_edge = cfg.voxel_edge / std::pow(cfg.T, 0.25);
  return out;
}

namespace {

std::vector<double> sup_norms(const SurvivalConfig& cfg, Eigen::Index n_paths,
                              const StreamSeeds& seeds) {
  std::vector<double> sup(static_cast<std::size_t>(n_paths), 0.0);
  parallel_for(n_paths, cfg.workers, [&](std::int64_t p) {
    const StringPath path = sample_path(cfg, seeds, static_cast<std::uint64_t>(p));
    sup[p] = std::sqrt(path.values.colwise().squaredNorm().maxCoeff());
  });
  return sup;
}

SurvivalEstimate certificate_from_sups(const SurvivalConfig& cfg, const std::vector<double>& sup,
                                       double alpha_ball) {
  if (!(alpha_ball > 0.0)) throw DomainError("confinement_certificate: alpha_ball must be > 0");
  const double n = static_cast<double>(sup.size());
  const double inside = static_cast<double>(
      std::count_if(sup.begin(), sup.end(), [&](double s) { return s <= alpha_ball; }));
  const double p = inside / n;
  const double empty_ball =
      std::exp(-cfg.nu * unit_ball_volume(cfg.d) * std::pow(alpha_ball + cfg.a, cfg.d));
  const double se = sup.size() > 1 ? std::sqrt(p * (1.0 - p) / (n - 1.0)) : 0.0;
  return make_estimate(EstimatorKind::kCertificate, cfg, p * empty_ball, se * empty_ball,
                       static_cast<Eigen::Index>(sup.size()));
}

}  // namespace

SurvivalEstimate confinement_certificate(const SurvivalConfig& cfg, double alpha_ball,
                                         Eigen::Index n_paths, const StreamSeeds& seeds) {
  cfg.validate();
  require_paths(n_paths);
  if (!(alpha_ball > 0.0)) throw DomainError("confinement_certificate: alpha_ball must be > 0");
  return certificate_from_sups(cfg, sup_norms(cfg, n_paths, seeds), alpha_ball);
}

std::vector<double> certificate_grid(const SurvivalConfig& cfg, int points, double spread) {
  if (points < 2) throw ConfigurationError("certificate_grid: need at least 2 points");
  if (!(spread > 1.0)) throw ConfigurationError("certificate_grid: spread must be > 1");
  const double ratio = cfg.nu > 0.0 ? cfg.J / cfg.nu : cfg.J;
  const double center = std::pow(ratio, 1.0 / (cfg.d + 2.0));
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    const double s = -1.0 + 2.0 * i / (points - 1.0);
    grid[i] = center * std::pow(spread, s);
  }
  return grid;
}

CertificateSweep optimize_certificate(const SurvivalConfig& cfg, const std::vector<double>& grid,
                                      Eigen::Index n_paths, const StreamSeeds& seeds) {
  cfg.validate();
  require_paths(n_paths);
  if (grid.empty()) throw ConfigurationError("alpha_ball grid: must not be empty");
  const std::vector<double> sup = sup_norms(cfg, n_paths, seeds);
  CertificateSweep sweep;
  sweep.alpha_balls = grid;
  for (double alpha : grid) sweep.estimates.push_back(certificate_from_sups(cfg, sup, alpha));
  for (std::size_t i = 1; i < sweep.estimates.size(); ++i)
    if (sweep.estimates[i].mean > sweep.estimates[sweep.best].mean) sweep.best = i;
  return sweep;
}

ExponentFit fit_exponent(const std::vector<double>& J_list, const std::vector<double>& means,
                         double T, const std::vector<double>* stderrs) {
  if (J_list.size() != means.size()) throw ConfigurationError("fit_exponent: size mismatch");
  if (J_list.size() < 4) throw ConfigurationError("fit_exponent: need at least 4 values of J");
  if (!(T > 0.0)) throw DomainError("fit_exponent: T must be > 0");
  if (stderrs != nullptr && stderrs->size() != means.size())
    throw ConfigurationError("fit_exponent: stderr size mismatch");
  const Eigen::Index n = static_cast<Eigen::Index>(J_list.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n), w = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double S = means[i];
    if (!(S > 0.0 && S < 1.0)) throw DomainError("fit_exponent: survival means must lie in (0, 1)");
    if (!(J_list[i] > 0.0)) throw DomainError("fit_exponent: J must be > 0");
    A(i, 0) = std::log(J_list[i] / std::sqrt(T));
    A(i, 1) = 1.0;
    b(i) = std::log(-std::log(S));
    if (stderrs != nullptr) {
      const double sd = (*stderrs)[i] / (S * std::abs(std::log(S)));
      if (sd > 0.0) w(i) = 1.0 / sd;
    }
  }
  const Eigen::MatrixXd Aw = w.asDiagonal() * A;
  const Eigen::VectorXd bw = w.asDiagonal() * b;
  const Eigen::Vector2d coef = Aw.colPivHouseholderQr().solve(bw);
  ExponentFit fit;
  fit.p_hat = coef(0);
  fit.c_hat = std::exp(coef(1));
  fit.residual = (Aw * coef - bw).squaredNorm();
  return fit;
}

}  // namespace polymer_traps
