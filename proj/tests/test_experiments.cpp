#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "picardlab/config.hpp"
#include "picardlab/experiments.hpp"
#include "picardlab/nested_picard.hpp"

using namespace picardlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// data rows of a CSV artifact (comment lines and header stripped)
std::vector<std::vector<std::string>> csv_rows(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(content);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "picardlab_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("ExperimentConfig: round-trip and hashing") {
  ExperimentConfig cfg;
  cfg.set("experiment", "series");
  cfg.set("b_norm_sq", "4.0");
  cfg.set("k_max", "12");
  const std::string text = cfg.serialize();
  const ExperimentConfig back = ExperimentConfig::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.hash() == cfg.hash());
  ExperimentConfig other = cfg;
  other.set("k_max", "13");
  CHECK(other.hash() != cfg.hash());
}

TEST_CASE("ExperimentConfig: parse and validation errors name the field") {
  CHECK_THROWS_AS((void)ExperimentConfig::parse("novalue\n"), ConfigError);
  const auto cfg = ExperimentConfig::parse("paths = twelve\n# comment\n\nseed = 7\n");
  CHECK(cfg.get_u64("seed", 0) == 7);
  try {
    (void)cfg.get_u64("paths", 0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "paths");
  }
}

TEST_CASE("run_series: pinned row values, n/a cells, byte-identical reruns") {
  const fs::path dir = fresh_dir("series");
  ExperimentConfig cfg;
  cfg.set("experiment", "series");
  cfg.set("out_dir", dir.string());
  cfg.set("b_norm_sq", "4");
  cfg.set("k_min", "1");
  cfg.set("k_max", "12");
  const auto result = run_series(cfg);
  REQUIRE(result.files_written.size() == 1);
  const std::string first = slurp(result.files_written[0]);
  const auto rows = csv_rows(first);
  REQUIRE(rows.size() == 12);
  // row n = 5: v^5(0,0) = 0.5, v^inf = e^{-1}, |gap| = 0.1321205588...
  const auto& r5 = rows[4];
  CHECK(r5[0] == "5");
  CHECK(std::stod(r5[1]) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::stod(r5[2]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::stod(r5[3]) == doctest::Approx(0.1321205588285577).epsilon(1e-12));
  // a10 column inadmissible below n = 3 for |b|^2 = 4
  CHECK(rows[0][6] == "n/a");
  CHECK(rows[1][6] == "n/a");
  CHECK(rows[2][6] != "n/a");
  // a21 inadmissible below n = 3 at eps = 0.5
  CHECK(rows[1][4] == "n/a");
  CHECK(rows[3][4] != "n/a");

  const auto rerun = run_series(cfg);
  CHECK(slurp(rerun.files_written[0]) == first);
}

TEST_CASE("run_series: b = 0 zeroes the gap column") {
  const fs::path dir = fresh_dir("series_zero");
  ExperimentConfig cfg;
  cfg.set("experiment", "series");
  cfg.set("out_dir", dir.string());
  cfg.set("b_norm_sq", "0");
  cfg.set("k_max", "6");
  const auto result = run_series(cfg);
  for (const auto& row : csv_rows(slurp(result.files_written[0])))
    CHECK(std::stod(row[3]) == 0.0);
}

TEST_CASE("run_series: eps outside (0,1) rejected with the field name") {
  ExperimentConfig cfg;
  cfg.set("experiment", "series");
  cfg.set("eps", "1.5");
  try {
    (void)run_series(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "eps");
  }
}

TEST_CASE("run_phase_transition: default config separates the modes") {
  const fs::path dir = fresh_dir("phase");
  ExperimentConfig cfg;
  cfg.set("experiment", "phase-transition");
  cfg.set("out_dir", dir.string());
  const auto result = run_phase_transition(cfg);
  REQUIRE(result.files_written.size() == 2);
  const auto summary = nlohmann::json::parse(result.summary_json);
  CHECK(summary["z_dependent"]["winner"] == "sqrt-factorial");
  CHECK(summary["ode"]["winner"] == "factorial");
  const double zd_sqrt = summary["z_dependent"]["fits"]["sqrt-factorial"]["residual"];
  const double zd_fact = summary["z_dependent"]["fits"]["factorial"]["residual"];
  CHECK(zd_sqrt * 10.0 <= zd_fact);
  const double ode_fact = summary["ode"]["fits"]["factorial"]["residual"];
  const double ode_sqrt = summary["ode"]["fits"]["sqrt-factorial"]["residual"];
  CHECK(ode_fact * 10.0 <= ode_sqrt);
  CHECK(summary["z_dependent"]["tie_warning"] == false);

  // byte-identical reruns, CSV and JSON both
  const std::string csv_first = slurp(result.files_written[0]);
  const std::string json_first = slurp(result.files_written[1]);
  const auto rerun = run_phase_transition(cfg);
  CHECK(slurp(rerun.files_written[0]) == csv_first);
  CHECK(slurp(rerun.files_written[1]) == json_first);
}

TEST_CASE("run_phase_transition: Monte Carlo source honors the cost ceiling") {
  ExperimentConfig cfg;
  cfg.set("experiment", "phase-transition");
  cfg.set("e_source", "mc");
  cfg.set("paths", "1000000000");
  cfg.set("steps", "1024");
  CHECK_THROWS_AS((void)run_phase_transition(cfg), BudgetError);
}

TEST_CASE("run_phase_transition: too few points rejected") {
  ExperimentConfig cfg;
  cfg.set("experiment", "phase-transition");
  cfg.set("k_min", "4");
  cfg.set("k_max", "5");
  try {
    (void)run_phase_transition(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "k_max");
  }
}

TEST_CASE("run_dimension_sweep: monotone growth and the log-log slope") {
  const fs::path dir = fresh_dir("dims");
  ExperimentConfig cfg;
  cfg.set("experiment", "dimension-sweep");
  cfg.set("out_dir", dir.string());
  cfg.set("dims_list", "1,2,4,8,16");
  cfg.set("dim_alpha", "1");
  cfg.set("k_list", "6");
  const auto result = run_dimension_sweep(cfg);
  const auto rows = csv_rows(slurp(result.files_written[0]));
  REQUIRE(rows.size() == 5);
  double prev = -1e300;
  for (const auto& row : rows) {
    const double log_a10 = std::stod(row[4]);
    CHECK(log_a10 > prev);
    prev = log_a10;
  }
  // slope in log m equals 2 * alpha * floor((k+1)/2) = 6
  const double slope = (std::stod(rows[4][4]) - std::stod(rows[3][4])) /
                       (std::log(16.0) - std::log(8.0));
  CHECK(slope == doctest::Approx(6.0).epsilon(1e-10));

  // alpha = 0 freezes the columns
  ExperimentConfig flat = cfg;
  flat.set("dim_alpha", "0");
  flat.set("out_dir", (dir / "flat").string());
  const auto flat_rows = csv_rows(slurp(run_dimension_sweep(flat).files_written[0]));
  for (const auto& row : flat_rows) {
    CHECK(std::stod(row[4]) == doctest::Approx(std::stod(flat_rows[0][4])).epsilon(1e-14));
    CHECK(std::stod(row[3]) == doctest::Approx(std::stod(flat_rows[0][3])).epsilon(1e-14));
  }
}

TEST_CASE("run_apriori: zero drift rows collapse, bad lambda rejected") {
  const fs::path dir = fresh_dir("apriori");
  ExperimentConfig cfg;
  cfg.set("experiment", "apriori");
  cfg.set("out_dir", dir.string());
  cfg.set("b_norm_sq", "0");
  cfg.set("paths", "200");
  cfg.set("steps", "16");
  cfg.set("k_list", "1");
  cfg.set("lambda_list", "1");
  const auto result = run_apriori(cfg);
  const auto summary = nlohmann::json::parse(result.summary_json);
  CHECK(summary["all_pass"] == true);
  for (const auto& cell : summary["entries"]) {
    CHECK(cell["lhs"] == 0.0);
    CHECK(cell["rhs"] == 0.0);
  }

  ExperimentConfig bad = cfg;
  bad.set("lambda_list", "-1");
  try {
    (void)run_apriori(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "lambda_list");
  }
}

TEST_CASE("run_apriori: small default-shaped sweep passes") {
  const fs::path dir = fresh_dir("apriori_small");
  ExperimentConfig cfg;
  cfg.set("experiment", "apriori");
  cfg.set("out_dir", dir.string());
  cfg.set("paths", "1500");
  cfg.set("steps", "64");
  cfg.set("k_list", "1,2");
  cfg.set("lambda_list", "1,k");
  cfg.set("alpha_list", "1,2");
  cfg.set("threads", "4");
  const auto summary = nlohmann::json::parse(run_apriori(cfg).summary_json);
  CHECK(summary["all_pass"] == true);
}

TEST_CASE("run_picard_mc: n = 0 row is exactly zero; ceiling reported before launch") {
  const fs::path dir = fresh_dir("picard_mc");
  ExperimentConfig cfg;
  cfg.set("experiment", "picard-mc");
  cfg.set("out_dir", dir.string());
  cfg.set("driver", "linear-z");
  cfg.set("budget", "50");
  cfg.set("k_min", "0");
  cfg.set("k_max", "2");
  const auto rows = csv_rows(slurp(run_picard_mc(cfg).files_written[0]));
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[0][1]) == 0.0);  // y estimate at n = 0
  CHECK(std::stod(rows[0][5]) == 0.0);  // z estimate at n = 0

  ExperimentConfig capped = cfg;
  capped.set("k_max", "4");
  capped.set("cost_ceiling", "100");
  CHECK_THROWS_AS((void)run_picard_mc(capped), BudgetError);

  ExperimentConfig unknown = cfg;
  unknown.set("driver", "cubic");
  try {
    (void)run_picard_mc(unknown);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "driver");
  }
}

TEST_CASE("run_command: dispatch and unknown keys") {
  ExperimentConfig cfg;
  cfg.set("experiment", "does-not-exist");
  CHECK_THROWS_AS((void)run_command(cfg), ConfigError);

  ExperimentConfig typo;
  typo.set("experiment", "series");
  typo.set("b_normsq", "4");
  try {
    (void)run_command(typo);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "b_normsq");
  }
}

TEST_CASE("artifacts stay inside the configured output directory") {
  const fs::path dir = fresh_dir("containment");
  ExperimentConfig cfg;
  cfg.set("experiment", "series");
  cfg.set("out_dir", dir.string());
  cfg.set("k_max", "4");
  const auto result = run_series(cfg);
  for (const auto& f : result.files_written) {
    CHECK(f.find(dir.string()) == 0);
    CHECK(fs::exists(f));
  }
  std::size_t count = 0;
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) ++count;
  CHECK(count == result.files_written.size());
}
