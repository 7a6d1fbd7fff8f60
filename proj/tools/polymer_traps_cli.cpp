#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polymer_traps/diagnostics.hpp"
#include "polymer_traps/errors.hpp"
#include "polymer_traps/heat_kernel.hpp"
#include "polymer_traps/random.hpp"
#include "polymer_traps/runner.hpp"
#include "polymer_traps/sausage.hpp"
#include "polymer_traps/survival.hpp"

using namespace polymer_traps;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
  std::string out;
  std::string format = "csv";
};

ExperimentConfig resolve(const Options& opt) {
  ExperimentConfig cfg = opt.config.empty() ? ExperimentConfig{} : load_config(opt.config);
  if (opt.seed_given) cfg.master_seed = opt.seed;
  if (opt.workers > 0) {
    cfg.workers = opt.workers;
  } else if (const char* env = std::getenv("POLYMER_TRAPS_WORKERS")) {
    const int w = std::atoi(env);
    if (w < 1) throw ConfigurationError("POLYMER_TRAPS_WORKERS: must be a positive integer");
    cfg.workers = w;
  }
  if (!opt.out.empty()) cfg.output = opt.out;
  return cfg;
}

template <typename Rows>
int emit(const ExperimentConfig& cfg, const Options& opt, const Rows& rows) {
  const OutputFormat format = opt.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (cfg.output.empty()) {
    write_rows(std::cout, rows, format);
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw ConfigurationError("output: cannot open " + cfg.output);
    write_rows(file, rows, format);
  }
  int status = 0;
  if constexpr (std::is_same_v<typename Rows::value_type, ResultRow>) {
    for (const auto& r : rows)
      if (!r.ok) {
        std::cerr << "failed cell: " << r.kind << " J=" << (r.J ? *r.J : 0.0) << ": " << r.message << '\n';
        status = 3;
      }
  }
  return status;
}

int selftest(const ExperimentConfig& base) {
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception& e) {
      std::cout << "  error: " << e.what() << '\n';
    }
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };
  check("stream golden value", [] {
    RandomStream s = derive_stream(0, 0, 0);
    return s.next_u64() == 0x99ec5f36cb75f2b4ULL;
  });
  check("periodic kernel normalization", [] {
    const KernelParams<double> p{4.0};
    const int n = 10000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += periodic_kernel(0.5, 4.0 * i / n, p);
    return std::abs(sum * 4.0 / n - 1.0) < 1e-9;
  });
  check("voxel ball volume", [] {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 1);
    const double v = sausage_volume_voxel(p, 1.0, 1.0 / 64.0).volume;
    return std::abs(v / std::numbers::pi - 1.0) < 0.02;
  });
  check("zero intensity survives", [&] {
    SurvivalConfig sc = base.survival(8.0);
    sc.nu = 0.0;
    return estimate_sausage(sc, 4, {base.master_seed, 0}).mean == 1.0;
  });
  check("scaling map at T = 1", [] {
    const ScaledParams s = scaling_map(2, 1.0, 10.0, 1.0, 0.5);
    return s.J == 10.0 && s.nu == 1.0 && s.a == 0.5;
  });
  check("planted exponent", [] {
    std::vector<double> J{8, 16, 32, 64}, S;
    for (double j : J) S.push_back(std::exp(-2.0 * std::sqrt(j)));
    const ExponentFit f = fit_exponent(J, S, 1.0);
    return std::abs(f.p_hat - 0.5) < 1e-9 && std::abs(f.c_hat - 2.0) < 1e-9;
  });
  check("straight-line kappa", [] {
    const InitialProfile line = straight_line_profile(2, 64.0, 1024);
    const KappaRecord rec = kappa_sequences(line, 1.0, 1.0, 0.5, 0.3);
    for (std::size_t i = 0; i < rec.kappa1.size(); ++i)
      if (rec.kappa1[i] != 4.0 * (i + 1)) return false;
    return rec.kappa1.size() == 16;
  });
  check("worker-count determinism", [&] {
    ExperimentConfig cfg = base;
    cfg.J_list = {8.0};
    cfg.n_paths = 8;
    cfg.n_replicas = 2;
    cfg.estimators = {"direct", "sausage"};
    std::ostringstream one, two;
    cfg.workers = 1;
    write_rows(one, run_experiment(cfg), OutputFormat::kCsv);
    cfg.workers = 3;
    write_rows(two, run_experiment(cfg), OutputFormat::kCsv);
    return one.str() == two.str();
  });
  std::cout << (failures == 0 ? "selftest passed" : "selftest failed") << '\n';
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo survival of a random string among Poisson hard traps"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "JSON configuration file");
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) {
    opt.seed = s;
    opt.seed_given = true;
  }, "master seed (overrides the config)");
  app.add_option("--workers", opt.workers, "worker threads (default: POLYMER_TRAPS_WORKERS or config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out, "output path (default: stdout)");
  app.add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* simulate = app.add_subcommand("simulate", "survival estimates over J_list x replicas");
  auto* sausage = app.add_subcommand("sausage", "voxel and hit-or-miss sausage volumes");
  auto* scaling = app.add_subcommand("scaling-check", "survival at original and scaled parameters");
  auto* exponent = app.add_subcommand("exponent-fit", "survival sweep over J_list and exponent fit");
  auto* certificate = app.add_subcommand("certificate", "confinement certificate over alpha_ball");
  auto* diagnostics = app.add_subcommand("diagnostics", "kappa counts, box counting, secterm ratios");
  auto* self = app.add_subcommand("selftest", "quick invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = resolve(opt);
    if (simulate->parsed()) return emit(cfg, opt, run_experiment(cfg));
    if (sausage->parsed()) return emit(cfg, opt, run_sausage_study(cfg));
    if (scaling->parsed()) return emit(cfg, opt, run_scaling_check(cfg));
    if (exponent->parsed()) return emit(cfg, opt, run_exponent_fit(cfg));
    if (certificate->parsed()) return emit(cfg, opt, run_certificate(cfg));
    if (diagnostics->parsed()) return emit(cfg, opt, run_diagnostics(cfg));
    if (self->parsed()) return selftest(cfg);
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
