#include "polymer_traps/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polymer_traps/diagnostics.hpp"
#include "polymer_traps/errors.hpp"
#include "polymer_traps/parallel.hpp"
#include "polymer_traps/sausage.hpp"

namespace polymer_traps {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "d", "T", "J", "J_list", "nu", "a", "n_x", "n_t", "n_modes", "n_paths", "n_fields_per_path",
    "n_replicas", "estimators", "alpha_ball", "Lambda", "alpha_star", "c0", "voxel_edge",
    "hit_or_miss_samples", "trace_n_t", "master_seed", "workers", "output"};

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first `"key"` used as an object key, or 0.
int line_of_key(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  for (std::size_t pos = text.find(quoted); pos != std::string::npos; pos = text.find(quoted, pos + 1)) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_of_offset(text, pos);
  }
  return 0;
}

[[noreturn]] void config_error(const std::string& text, const std::string& field, const std::string& what) {
  const int line = line_of_key(text, field);
  std::ostringstream msg;
  msg << "config";
  if (line > 0) msg << " line " << line;
  msg << ": " << field << ": " << what;
  throw ConfigurationError(msg.str());
}

double get_number(const std::string& text, const json& j, const std::string& key) {
  if (!j.is_number()) config_error(text, key, "expected a number");
  return j.get<double>();
}

Eigen::Index get_count(const std::string& text, const json& j, const std::string& key) {
  if (!j.is_number_integer()) config_error(text, key, "expected an integer");
  return static_cast<Eigen::Index>(j.get<std::int64_t>());
}

std::vector<double> get_numbers(const std::string& text, const json& j, const std::string& key) {
  if (!j.is_array()) config_error(text, key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(text, v, key));
  return out;
}

SurvivalEstimate combine_replicas(const std::vector<SurvivalEstimate>& parts) {
  SurvivalEstimate out = parts.front();
  double sum = 0.0, var = 0.0;
  Eigen::Index replicas = 0;
  for (const auto& p : parts) {
    sum += p.mean;
    var += p.standard_error * p.standard_error;
    replicas += p.replicas;
  }
  const double n = static_cast<double>(parts.size());
  out.mean = sum / n;
  out.standard_error = std::sqrt(var) / n;
  out.replicas = replicas;
  return out;
}

ResultRow row_from(const SurvivalEstimate& est, Eigen::Index n_paths, std::uint64_t seed) {
  ResultRow row;
  row.kind = to_string(est.kind);
  row.d = est.d;
  row.T = est.T;
  row.J = est.J;
  row.nu = est.nu;
  row.a = est.a;
  row.n_paths = n_paths;
  row.mean = est.mean;
  row.standard_error = est.standard_error;
  row.seed = seed;
  return row;
}

ResultRow failed_row(const std::string& kind, const SurvivalConfig& sc, Eigen::Index n_paths,
                     std::uint64_t seed, const std::string& message) {
  ResultRow row;
  row.kind = kind;
  row.d = sc.d;
  row.T = sc.T;
  row.J = sc.J;
  row.nu = sc.nu;
  row.a = sc.a;
  row.n_paths = n_paths;
  row.mean = std::nan("");
  row.standard_error = std::nan("");
  row.seed = seed;
  row.ok = false;
  row.message = message;
  return row;
}

// Runs cells in parallel when there are enough of them, otherwise parallelizes inside.
template <typename Cell>
void run_cells(std::int64_t n_cells, int workers, Cell&& cell) {
  if (n_cells >= workers) {
    parallel_for(n_cells, workers, [&](std::int64_t i) { cell(i, 1); });
  } else {
    for (std::int64_t i = 0; i < n_cells; ++i) cell(i, workers);
  }
}

StreamSeeds replica_seeds(const ExperimentConfig& cfg, Eigen::Index replica) {
  return {cfg.master_seed, static_cast<std::uint64_t>(replica * cfg.n_paths)};
}

std::optional<ResultRow> fit_row(const ExperimentConfig& cfg, const std::vector<SurvivalEstimate>& per_J) {
  if (per_J.size() < 4) return std::nullopt;
  ResultRow row;
  row.kind = "fit";
  row.d = cfg.d;
  row.T = cfg.T;
  row.nu = cfg.nu;
  row.a = cfg.a;
  row.n_paths = cfg.n_paths * cfg.n_replicas;
  row.seed = cfg.master_seed;
  std::vector<double> Js, means;
  for (const auto& e : per_J) {
    Js.push_back(e.J);
    means.push_back(e.mean);
  }
  try {
    const ExponentFit fit = fit_exponent(Js, means, cfg.T);
    row.mean = fit.p_hat;
    row.standard_error = fit.residual;
    row.param = fit.c_hat;
  } catch (const std::exception& e) {
    row.mean = row.standard_error = std::nan("");
    row.ok = false;
    row.message = e.what();
  }
  return row;
}

}  // namespace

SurvivalConfig ExperimentConfig::survival(double J) const {
  SurvivalConfig sc;
  sc.d = d;
  sc.T = T;
  sc.J = J;
  sc.nu = nu;
  sc.a = a;
  sc.n_x = n_x;
  sc.n_t = n_t;
  sc.n_modes = n_modes;
  sc.voxel_edge = voxel_edge;
  sc.workers = workers;
  return sc;
}

void ExperimentConfig::validate() const {
  if (J_list.empty()) throw ConfigurationError("J_list: must not be empty");
  for (double J : J_list) survival(J).validate();
  if (n_paths < 1) throw ConfigurationError("n_paths: must be >= 1");
  if (n_fields_per_path < 1) throw ConfigurationError("n_fields_per_path: must be >= 1");
  if (n_replicas < 1) throw ConfigurationError("n_replicas: must be >= 1");
  if (estimators.empty()) throw ConfigurationError("estimators: must not be empty");
  for (const auto& e : estimators)
    if (e != "direct" && e != "sausage" && e != "certificate")
      throw ConfigurationError("estimators: unknown estimator '" + e + "'");
  for (double x : alpha_ball)
    if (!(x > 0.0)) throw ConfigurationError("alpha_ball: values must be > 0");
  if (!(Lambda >= 1.0)) throw ConfigurationError("Lambda: must be >= 1");
  if (!(alpha_star > 0.0) || alpha_star > 1.0) throw ConfigurationError("alpha_star: must lie in (0, 1]");
  if (c0 < 0.0) throw ConfigurationError("c0: must be >= 0");
  if (hit_or_miss_samples < 1000) throw ConfigurationError("hit_or_miss_samples: must be >= 1000");
  if (trace_n_t < 1) throw ConfigurationError("trace_n_t: must be >= 1");
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "config line " << line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0) << ": invalid JSON";
    throw ConfigurationError(msg.str());
  }
  if (!root.is_object()) throw ConfigurationError("config line 1: top level must be an object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : root.items()) {
    if (!kKnownKeys.count(key)) config_error(text, key, "unknown key");
    if (key == "d") cfg.d = static_cast<int>(get_count(text, value, key));
    else if (key == "T") cfg.T = get_number(text, value, key);
    else if (key == "J") cfg.J_list = {get_number(text, value, key)};
    else if (key == "J_list") cfg.J_list = get_numbers(text, value, key);
    else if (key == "nu") cfg.nu = get_number(text, value, key);
    else if (key == "a") cfg.a = get_number(text, value, key);
    else if (key == "n_x") cfg.n_x = get_count(text, value, key);
    else if (key == "n_t") cfg.n_t = get_count(text, value, key);
    else if (key == "n_modes") cfg.n_modes = get_count(text, value, key);
    else if (key == "n_paths") cfg.n_paths = get_count(text, value, key);
    else if (key == "n_fields_per_path") cfg.n_fields_per_path = get_count(text, value, key);
    else if (key == "n_replicas") cfg.n_replicas = get_count(text, value, key);
    else if (key == "alpha_ball") cfg.alpha_ball = value.is_array() ? get_numbers(text, value, key)
                                                                    : std::vector<double>{get_number(text, value, key)};
    else if (key == "Lambda") cfg.Lambda = get_number(text, value, key);
    else if (key == "alpha_star") cfg.alpha_star = get_number(text, value, key);
    else if (key == "c0") cfg.c0 = get_number(text, value, key);
    else if (key == "voxel_edge") cfg.voxel_edge = get_number(text, value, key);
    else if (key == "hit_or_miss_samples") cfg.hit_or_miss_samples = get_count(text, value, key);
    else if (key == "trace_n_t") cfg.trace_n_t = get_count(text, value, key);
    else if (key == "workers") cfg.workers = static_cast<int>(get_count(text, value, key));
    else if (key == "master_seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0))
        config_error(text, key, "expected a non-negative integer");
      cfg.master_seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      if (!value.is_string()) config_error(text, key, "expected a string");
      cfg.output = value.get<std::string>();
    } else if (key == "estimators") {
      if (value.is_string()) {
        cfg.estimators = {value.get<std::string>()};
      } else if (value.is_array()) {
        cfg.estimators.clear();
        for (const auto& v : value) {
          if (!v.is_string()) config_error(text, key, "expected strings");
          cfg.estimators.push_back(v.get<std::string>());
        }
      } else {
        config_error(text, key, "expected a string or an array of strings");
      }
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigurationError& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    std::string field = colon == std::string::npos ? "" : what.substr(0, colon);
    if (field == "J_list" && !root.contains("J_list") && root.contains("J")) field = "J";
    if (field.empty() || field.find(' ') != std::string::npos) throw;
    config_error(text, field, colon + 2 < what.size() ? what.substr(colon + 2) : what);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_J = cfg.J_list.size(), n_est = cfg.estimators.size();
  const auto n_rep = static_cast<std::size_t>(cfg.n_replicas);
  const std::size_t n_cells = n_J * n_rep * n_est;
  std::vector<ResultRow> rows(n_cells);
  std::vector<std::optional<SurvivalEstimate>> estimates(n_cells);
  run_cells(static_cast<std::int64_t>(n_cells), cfg.workers, [&](std::int64_t i, int inner) {
    const std::size_t e = static_cast<std::size_t>(i) % n_est;
    const std::size_t r = (static_cast<std::size_t>(i) / n_est) % n_rep;
    const std::size_t j = static_cast<std::size_t>(i) / (n_est * n_rep);
    SurvivalConfig sc = cfg.survival(cfg.J_list[j]);
    sc.workers = inner;
    const StreamSeeds seeds = replica_seeds(cfg, static_cast<Eigen::Index>(r));
    const std::string& kind = cfg.estimators[e];
    try {
      SurvivalEstimate est;
      std::optional<double> param;
      if (kind == "direct") {
        est = estimate_direct(sc, cfg.n_paths, cfg.n_fields_per_path, seeds);
      } else if (kind == "sausage") {
        est = estimate_sausage(sc, cfg.n_paths, seeds);
      } else {
        const auto grid = cfg.alpha_ball.empty() ? certificate_grid(sc) : cfg.alpha_ball;
        const CertificateSweep sweep = optimize_certificate(sc, grid, cfg.n_paths, seeds);
        est = sweep.estimates[sweep.best];
        param = sweep.alpha_balls[sweep.best];
      }
      estimates[i] = est;
      rows[i] = row_from(est, cfg.n_paths, cfg.master_seed);
      rows[i].param = param;
    } catch (const std::exception& ex) {
      rows[i] = failed_row(kind, sc, cfg.n_paths, cfg.master_seed, ex.what());
    }
  });

  // Fit on the sausage estimates when present, otherwise on the direct ones.
  for (const char* preferred : {"sausage", "direct"}) {
    const auto it = std::find(cfg.estimators.begin(), cfg.estimators.end(), preferred);
    if (it == cfg.estimators.end()) continue;
    const std::size_t e = static_cast<std::size_t>(it - cfg.estimators.begin());
    std::vector<SurvivalEstimate> per_J;
    bool complete = true;
    for (std::size_t j = 0; j < n_J; ++j) {
      std::vector<SurvivalEstimate> parts;
      for (std::size_t r = 0; r < n_rep; ++r) {
        const auto& est = estimates[(j * n_rep + r) * n_est + e];
        if (est) parts.push_back(*est);
      }
      if (parts.size() != n_rep) complete = false;
      if (!parts.empty()) per_J.push_back(combine_replicas(parts));
    }
    if (n_J >= 4) {
      auto row = complete ? fit_row(cfg, per_J) : std::nullopt;
      if (!row) {
        ResultRow failed;
        failed.kind = "fit";
        failed.d = cfg.d;
        failed.T = cfg.T;
        failed.nu = cfg.nu;
        failed.a = cfg.a;
        failed.n_paths = cfg.n_paths * cfg.n_replicas;
        failed.mean = failed.standard_error = std::nan("");
        failed.seed = cfg.master_seed;
        failed.ok = false;
        failed.message = "fit: missing estimates";
        row = failed;
      }
      rows.push_back(*row);
    }
    break;
  }
  return rows;
}

std::vector<ResultRow> run_sausage_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto n_rep = static_cast<std::size_t>(cfg.n_replicas);
  const std::size_t n_cells = cfg.J_list.size() * n_rep;
  std::vector<ResultRow> rows(2 * n_cells);
  run_cells(static_cast<std::int64_t>(n_cells), cfg.workers, [&](std::int64_t i, int) {
    const std::size_t r = static_cast<std::size_t>(i) % n_rep;
    const SurvivalConfig sc = cfg.survival(cfg.J_list[static_cast<std::size_t>(i) / n_rep]);
    try {
      const StringPath path = sample_path(sc, {cfg.master_seed, 0}, r);
      const SausageEstimate voxel = sausage_volume_voxel(path.values, sc.a, sc.voxel());
      RandomStream stream = derive_stream(cfg.master_seed, r, StreamPurpose::kHitOrMiss);
      const SausageEstimate hom = sausage_volume_hit_or_miss(path.values, sc.a, cfg.hit_or_miss_samples, stream);
      for (int m = 0; m < 2; ++m) {
        const SausageEstimate& v = m == 0 ? voxel : hom;
        ResultRow row = failed_row(std::string("sausage_") + to_string(v.method), sc, 1, cfg.master_seed, "");
        row.ok = true;
        row.mean = v.volume;
        row.standard_error = v.standard_error;
        row.param = v.resolution;
        rows[2 * i + m] = row;
      }
    } catch (const std::exception& ex) {
      rows[2 * i] = failed_row("sausage_voxel", sc, 1, cfg.master_seed, ex.what());
      rows[2 * i + 1] = failed_row("sausage_hit_or_miss", sc, 1, cfg.master_seed, ex.what());
    }
  });
  return rows;
}

std::vector<ResultRow> run_scaling_check(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  for (double J : cfg.J_list) {
    SurvivalConfig original = cfg.survival(J);
    original.n_x = original.grid_points();
    const SurvivalConfig scaled = scaled_config(original);
    const StreamSeeds seeds{cfg.master_seed, 0};
    // The scaled run uses a disjoint block of replicas.
    const StreamSeeds scaled_seeds{cfg.master_seed, std::uint64_t{1} << 40};
    try {
      SurvivalEstimate lhs = estimate_sausage(original, cfg.n_paths, seeds);
      SurvivalEstimate rhs = estimate_sausage(scaled, cfg.n_paths, scaled_seeds);
      ResultRow a = row_from(lhs, cfg.n_paths, cfg.master_seed);
      ResultRow b = row_from(rhs, cfg.n_paths, cfg.master_seed);
      a.kind = "scaling_original";
      b.kind = "scaling_scaled";
      ResultRow gap = a;
      gap.kind = "scaling_gap";
      gap.mean = lhs.mean - rhs.mean;
      gap.standard_error = combined_error(lhs, rhs);
      gap.param = gap.standard_error > 0.0 ? std::abs(gap.mean) / gap.standard_error : 0.0;
      rows.insert(rows.end(), {a, b, gap});
    } catch (const std::exception& ex) {
      rows.push_back(failed_row("scaling_original", original, cfg.n_paths, cfg.master_seed, ex.what()));
    }
  }
  return rows;
}

std::vector<ResultRow> run_exponent_fit(const ExperimentConfig& cfg) {
  ExperimentConfig sweep = cfg;
  sweep.estimators = {"sausage"};
  return run_experiment(sweep);
}

std::vector<ResultRow> run_certificate(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  for (double J : cfg.J_list) {
    const SurvivalConfig sc = cfg.survival(J);
    const StreamSeeds seeds{cfg.master_seed, 0};
    try {
      rows.push_back(row_from(estimate_sausage(sc, cfg.n_paths, seeds), cfg.n_paths, cfg.master_seed));
      const auto grid = cfg.alpha_ball.empty() ? certificate_grid(sc) : cfg.alpha_ball;
      const CertificateSweep sweep = optimize_certificate(sc, grid, cfg.n_paths, seeds);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ResultRow row = row_from(sweep.estimates[i], cfg.n_paths, cfg.master_seed);
        row.param = grid[i];
        rows.push_back(row);
      }
    } catch (const std::exception& ex) {
      rows.push_back(failed_row("certificate", sc, cfg.n_paths, cfg.master_seed, ex.what()));
    }
  }
  return rows;
}

std::vector<DiagnosticRow> run_diagnostics(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto n_rep = static_cast<std::size_t>(cfg.n_replicas);
  const std::size_t n_cells = cfg.J_list.size() * n_rep;
  std::vector<DiagnosticRow> rows(n_cells);
  run_cells(static_cast<std::int64_t>(n_cells), cfg.workers, [&](std::int64_t i, int) {
    const std::size_t r = static_cast<std::size_t>(i) % n_rep;
    const double J = cfg.J_list[static_cast<std::size_t>(i) / n_rep];
    RandomStream stream = derive_stream(cfg.master_seed, r, StreamPurpose::kInitialProfile);
    const InitialProfile profile = sample_bridge(cfg.d, J, cfg.survival(J).grid_points(), stream);
    const double c0 = cfg.c0 > 0.0 ? cfg.c0 : default_c0(J, cfg.alpha_star);
    const KappaRecord rec = kappa_sequences(profile, cfg.Lambda, cfg.alpha_star, c0, cfg.a);
    DiagnosticRow& row = rows[i];
    row.kind = "kappa";
    row.J = J;
    row.replica = static_cast<Eigen::Index>(r);
    row.N1 = rec.n1;
    row.N2 = rec.n2;
    row.N3 = rec.n3;
    row.count = static_cast<double>(rec.overlaps);
    row.value = rec.modulus;
  });

  const double J0 = cfg.J_list.front();
  RandomStream noise = derive_stream(cfg.master_seed, 0, StreamPurpose::kNoise);
  const Eigen::Index modes = cfg.n_modes > 0 ? cfg.n_modes : 1024;
  const Eigen::MatrixXd trace = sample_noise_trace(cfg.d, J0, 0.0, cfg.T, cfg.trace_n_t, modes, noise);
  const std::vector<double> eps = log_spaced(0.5, 0.5 * std::pow(10.0, -1.5), 8);
  const DimensionEstimate dim = minkowski_dimension(trace, eps);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    DiagnosticRow row;
    row.kind = "dimension";
    row.J = J0;
    row.epsilon = dim.epsilons[k];
    row.count = dim.counts[k];
    row.value = dim.slope;
    rows.push_back(row);
  }

  std::vector<double> deltas;
  for (double D : {1.0, 2.0, 3.0})
    if (D < 0.5 * J0) deltas.push_back(D);
  if (!deltas.empty()) {
    std::vector<std::pair<double, double>> st;
    for (double t : {0.2, 0.5, 1.0})
      for (double gap : {1e-3, 1e-2, 1e-1}) st.emplace_back(t - gap, t);
    const SectermCheck check = secterm_quadrature_check(deltas, st, J0, 0.5 * cfg.alpha_star * J0);
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      DiagnosticRow row;
      row.kind = "secterm";
      row.J = J0;
      row.epsilon = deltas[k];
      row.value = check.max_ratio_by_delta[k];
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
json json_opt(const std::optional<double>& x) { return x ? json_number(*x) : json(nullptr); }

}  // namespace

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    out << "kind,d,T,J,nu,a,n_paths,mean,stderr,seed,param,status\n";
    for (const auto& r : rows)
      out << r.kind << ',' << r.d << ',' << format_double(r.T) << ',' << opt(r.J) << ','
          << format_double(r.nu) << ',' << format_double(r.a) << ',' << r.n_paths << ','
          << format_double(r.mean) << ',' << format_double(r.standard_error) << ',' << r.seed
          << ',' << opt(r.param) << ',' << (r.ok ? "ok" : "failed") << '\n';
    return;
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"kind", r.kind}, {"d", r.d}, {"T", json_number(r.T)}, {"J", json_opt(r.J)},
                   {"nu", json_number(r.nu)}, {"a", json_number(r.a)}, {"n_paths", r.n_paths},
                   {"mean", json_number(r.mean)}, {"stderr", json_number(r.standard_error)},
                   {"seed", r.seed}, {"param", json_opt(r.param)},
                   {"status", r.ok ? "ok" : "failed"}});
  out << arr.dump(2) << '\n';
}

void write_rows(std::ostream& out, const std::vector<DiagnosticRow>& rows, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    out << "kind,J,replica,N1,N2,N3,epsilon,count,value\n";
    for (const auto& r : rows)
      out << r.kind << ',' << format_double(r.J) << ',' << r.replica << ',' << r.N1 << ','
          << r.N2 << ',' << r.N3 << ',' << opt(r.epsilon) << ',' << opt(r.count) << ','
          << opt(r.value) << '\n';
    return;
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"kind", r.kind}, {"J", json_number(r.J)}, {"replica", r.replica},
                   {"N1", r.N1}, {"N2", r.N2}, {"N3", r.N3}, {"epsilon", json_opt(r.epsilon)},
                   {"count", json_opt(r.count)}, {"value", json_opt(r.value)}});
  out << arr.dump(2) << '\n';
}

}  // namespace polymer_traps
