#include <doctest.h>

#include <sstream>
#include <string>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/runner.hpp"

using namespace polymer_traps;

namespace {

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_rows(out, rows, OutputFormat::kCsv);
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(R"({
    "d": 2, "T": 1.0, "J_list": [8, 16], "nu": 0.5, "a": 0.3,
    "n_t": 8, "n_paths": 5, "estimators": ["direct", "sausage"],
    "master_seed": 18446744073709551615, "workers": 2
  })");
  CHECK(cfg.J_list.size() == 2);
  CHECK(cfg.master_seed == 18446744073709551615ULL);
  CHECK(cfg.estimators.size() == 2);
  CHECK(parse_config(R"({"J": 12})").J_list == std::vector<double>{12.0});
}

TEST_CASE("config errors name the line and the field") {
  CHECK_THROWS_WITH_AS(parse_config("{\n \"J\": 8,\n \"a\": 1.5\n}"), "config line 3: a: must lie in (0, 1]",
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"J\": 8,\n \"colour\": 1\n}"), "config line 3: colour: unknown key",
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n\n \"n_paths\": \"many\"\n}"), "config line 3: n_paths: expected an integer",
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"J\": 8,\n \"n_x\": 16\n}"),
                       doctest::Contains("config line 3: n_x"), ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"d\": 0\n}"), doctest::Contains("line 2: d"), ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"n_replicas\": 0\n}"), doctest::Contains("line 2: n_replicas"),
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"estimators\": [\"magic\"]\n}"), doctest::Contains("line 2: estimators"),
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"J\": 8,\n \"T\": 1\n"), doctest::Contains("invalid JSON"),
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"Lambda\": 0.5\n}"), doctest::Contains("line 2: Lambda"), ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"alpha_star\": 1.5\n}"), doctest::Contains("line 2: alpha_star"),
                       ConfigurationError);
  CHECK_THROWS_WITH_AS(parse_config("{\n \"alpha_ball\": [1, -2]\n}"), doctest::Contains("line 2: alpha_ball"),
                       ConfigurationError);
}

TEST_CASE("zero intensity smoke run") {
  ExperimentConfig cfg;
  cfg.nu = 0.0;
  cfg.n_t = 4;
  cfg.n_paths = 3;
  cfg.n_replicas = 2;
  cfg.estimators = {"direct", "sausage", "certificate"};
  for (const auto& row : run_experiment(cfg)) {
    if (row.kind == "certificate") continue;
    CHECK(row.mean == 1.0);
    CHECK(row.ok);
  }
}

TEST_CASE("byte-identical reruns regardless of workers") {
  ExperimentConfig cfg;
  cfg.nu = 0.1;
  cfg.n_t = 4;
  cfg.n_paths = 6;
  cfg.n_replicas = 3;
  cfg.J_list = {8.0, 12.0};
  cfg.estimators = {"direct", "sausage"};
  cfg.master_seed = 99;
  const std::string first = csv(run_experiment(cfg));
  CHECK(first == csv(run_experiment(cfg)));
  cfg.workers = 4;
  CHECK(first == csv(run_experiment(cfg)));
  cfg.workers = 13;
  CHECK(first == csv(run_experiment(cfg)));
  cfg.master_seed = 100;
  CHECK(first != csv(run_experiment(cfg)));
}

TEST_CASE("sweep row count") {
  ExperimentConfig cfg;
  cfg.nu = 0.2;
  cfg.n_t = 2;
  cfg.n_paths = 2;
  cfg.n_replicas = 3;
  cfg.J_list = {8, 16, 32, 64};
  const auto rows = run_experiment(cfg);
  CHECK(rows.size() == 4 * 3 + 1);
  CHECK(rows.back().kind == "fit");
  CHECK(std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return r.kind == "sausage"; }) == 12);
}

TEST_CASE("a failed cell does not poison the others") {
  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.a = 0.01;
  cfg.nu = 0.1;
  cfg.J_list = {2.0};
  cfg.n_t = 2;
  cfg.n_paths = 2;
  cfg.estimators = {"direct", "sausage"};
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  const std::string text = csv(rows);
  CHECK(text.find(",ok\n") != std::string::npos);
  CHECK(text.find("nan") != std::string::npos);
  CHECK(text.find(",failed\n") != std::string::npos);
}

TEST_CASE("csv layout") {
  ResultRow row;
  row.kind = "sausage";
  row.d = 2;
  row.T = 1.0;
  row.J = 8.0;
  row.nu = 1.0;
  row.a = 0.3;
  row.n_paths = 10;
  row.mean = 0.1;
  row.standard_error = 0.0;
  row.seed = 7;
  const std::string text = csv({row});
  CHECK(text == "kind,d,T,J,nu,a,n_paths,mean,stderr,seed,param,status\n"
                "sausage,2,1,8,1,0.29999999999999999,10,0.10000000000000001,0,7,,ok\n");
  std::ostringstream js;
  write_rows(js, {row}, OutputFormat::kJson);
  CHECK(js.str().find("\"kind\": \"sausage\"") != std::string::npos);
}

TEST_CASE("other studies") {
  ExperimentConfig cfg;
  cfg.n_t = 4;
  cfg.n_paths = 4;
  cfg.J_list = {8.0};
  const auto saus = run_sausage_study(cfg);
  REQUIRE(saus.size() == 2);
  CHECK(saus[0].kind == "sausage_voxel");
  CHECK(saus[1].kind == "sausage_hit_or_miss");
  const auto scaling = run_scaling_check(cfg);
  REQUIRE(scaling.size() == 3);
  CHECK(scaling[2].kind == "scaling_gap");
  const auto cert = run_certificate(cfg);
  CHECK(cert.size() == 9);
  cfg.J_list = {16.0};
  cfg.trace_n_t = 4096;
  const auto diag = run_diagnostics(cfg);
  CHECK(diag.front().kind == "kappa");
  CHECK(std::count_if(diag.begin(), diag.end(), [](const DiagnosticRow& r) { return r.kind == "dimension"; }) == 8);
  CHECK(std::count_if(diag.begin(), diag.end(), [](const DiagnosticRow& r) { return r.kind == "secterm"; }) == 3);
}
