#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polymer_traps/survival.hpp"

namespace polymer_traps {

/// All run parameters. JSON keys are the field names.
struct ExperimentConfig {
  int d = 2;
  double T = 1.0;
  std::vector<double> J_list{8.0};  // "J" sets a single value
  double nu = 1.0;
  double a = 0.3;
  Eigen::Index n_x = 0;
  Eigen::Index n_t = 64;
  Eigen::Index n_modes = -1;
  Eigen::Index n_paths = 100;
  Eigen::Index n_fields_per_path = 1;
  Eigen::Index n_replicas = 1;
  std::vector<std::string> estimators{"sausage"};
  std::vector<double> alpha_ball;  // empty: 8-point grid around (J / nu)^(1/(d+2))
  double Lambda = 1.0;
  double alpha_star = 0.25;
  double c0 = 0.0;  // <= 0: default_c0(J, alpha_star)
  double voxel_edge = 0.0;
  Eigen::Index hit_or_miss_samples = 100000;
  Eigen::Index trace_n_t = 65536;
  std::uint64_t master_seed = 0;
  int workers = 1;
  std::string output;

  SurvivalConfig survival(double J) const;
  /// Throws ConfigurationError naming the field.
  void validate() const;
};

/// Parses and validates JSON text; errors carry "line N" of the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// One result line. Non-finite numbers are written as "nan".
struct ResultRow {
  std::string kind;
  int d = 0;
  double T = 0.0;
  std::optional<double> J;
  double nu = 0.0;
  double a = 0.0;
  Eigen::Index n_paths = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> param;  // alpha_ball for certificates
  bool ok = true;
  std::string message;
};

struct DiagnosticRow {
  std::string kind;  // kappa, dimension, secterm
  double J = 0.0;
  Eigen::Index replica = 0;
  Eigen::Index N1 = 0, N2 = 0, N3 = 0;
  std::optional<double> epsilon;  // box scale, or Delta for secterm rows
  std::optional<double> count;
  std::optional<double> value;
};

enum class OutputFormat { kCsv, kJson };

/// Survival estimators over every (J, replica, estimator) cell, then one fit row when
/// J_list has at least 4 values.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);
/// Voxel and hit-or-miss sausage volumes of one path per (J, replica).
std::vector<ResultRow> run_sausage_study(const ExperimentConfig& cfg);
/// Sausage survival at the original and scaled parameters for every J.
std::vector<ResultRow> run_scaling_check(const ExperimentConfig& cfg);
/// Sausage survival per J and the exponent fit.
std::vector<ResultRow> run_exponent_fit(const ExperimentConfig& cfg);
/// Certificate for every alpha_ball, one sausage reference row per J.
std::vector<ResultRow> run_certificate(const ExperimentConfig& cfg);
/// kappa counts per (J, replica), box counting of one noise trace, secterm ratios.
std::vector<DiagnosticRow> run_diagnostics(const ExperimentConfig& cfg);

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format);
void write_rows(std::ostream& out, const std::vector<DiagnosticRow>& rows, OutputFormat format);

/// Decimal rendering with 17 significant digits.
std::string format_double(double x);

}  // namespace polymer_traps
