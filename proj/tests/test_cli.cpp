#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "adexp/config.hpp"
#include "adexp/report.hpp"

using namespace adexp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
  const ExperimentConfig config = parse_config_text(
      R"({"scenario": "stationary2", "policies": ["cgse"]})");
  CHECK(config.delta == 0.1);
  CHECK(config.rho == 1.0);
  CHECK(config.replications == 100);
  CHECK(config.master_seed == 1);
  CHECK(config.scenario.name == "stationary2");
  CHECK(config.scenario.spec.arm_count() == 2);
  REQUIRE(config.policies.size() == 1);
  CHECK(config.policies[0].kind.tag == PolicyTag::kCgse);
  CHECK(config.policies[0].kind.ttts_beta == 0.5);
  CHECK_FALSE(config.continue_after_stop);
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string err = error_of(
      R"({"scenario": "stationary2", "policies": ["cgse"], "deltas": 0.2})");
  CHECK(err.find("$.deltas") != std::string::npos);
  CHECK(err.find("unknown key") != std::string::npos);

  const std::string nested = error_of(
      R"({"scenario": {"means": [[0.2]], "traffic": 10, "blah": 1},
          "policies": ["cgse"]})");
  CHECK(nested.find("$.scenario.blah") != std::string::npos);
}

TEST_CASE("invalid means are rejected with the offending path") {
  const std::string err = error_of(
      R"({"scenario": {"means": [[0.4, 0.4], [0.3, 1.2]], "traffic": 100},
          "policies": ["cgse"]})");
  CHECK(err.find("$.scenario.means[1][1]") != std::string::npos);
}

TEST_CASE("policy parameters are validated per kind") {
  CHECK(error_of(R"({"scenario": "stationary2",
                     "policies": [{"kind": "ts", "beta": 0.4}]})")
            .find("$.policies[0].beta") != std::string::npos);
  CHECK(error_of(R"({"scenario": "stationary2",
                     "policies": [{"kind": "cgse", "posterior_samples": 10}]})")
            .find("$.policies[0].posterior_samples") != std::string::npos);
  CHECK(error_of(R"({"scenario": "stationary2", "policies": ["nope"]})")
            .find("$.policies[0]") != std::string::npos);
  CHECK(error_of(R"({"scenario": "stationary2", "policies": []})")
            .find("$.policies") != std::string::npos);

  const ExperimentConfig config = parse_config_text(
      R"({"scenario": "stationary2",
          "policies": ["cgse", {"kind": "cgse", "delta": 0.05},
                        {"kind": "ttts", "beta": 0.3}]})");
  CHECK(config.policies[0].label == "cgse");
  CHECK(config.policies[1].label == "cgse.2");
  CHECK(config.policies[1].kind.cgse_delta == 0.05);
  CHECK(config.policies[2].kind.ttts_beta == 0.3);
}

TEST_CASE("config validation covers the numeric ranges") {
  CHECK(error_of(R"({"scenario": "stationary2", "policies": ["cgse"],
                     "delta": 1.5})")
            .find("$.delta") != std::string::npos);
  CHECK(error_of(R"({"scenario": "stationary2", "policies": ["cgse"],
                     "rho": 0})")
            .find("$.rho") != std::string::npos);
  CHECK(error_of(R"({"scenario": "stationary2", "policies": ["cgse"],
                     "replications": 0})")
            .find("$.replications") != std::string::npos);
  CHECK(error_of(R"({"scenario": "bogus", "policies": ["cgse"]})")
            .find("$.scenario") != std::string::npos);
}

TEST_CASE("inline scenarios broadcast traffic and honor horizons") {
  const ExperimentConfig config = parse_config_text(
      R"({"scenario": {"means": [[0.2, 0.3, 0.4], [0.5, 0.5, 0.5]],
                       "traffic": 250},
          "policies": ["uniform"]})");
  CHECK(config.scenario.spec.horizon() == 3);
  CHECK(config.scenario.spec.traffic(2) == 250);
  CHECK(config.scenario.name == "custom");

  CHECK(error_of(
            R"({"scenario": {"means": [[0.2, 0.3]], "traffic": 250},
                "policies": ["uniform"], "horizon": 5})")
            .find("$.horizon") != std::string::npos);

  const ExperimentConfig overridden = parse_config_text(
      R"({"scenario": "stationary2", "policies": ["uniform"],
          "horizon": 7, "daily_traffic": 123})");
  CHECK(overridden.scenario.spec.horizon() == 7);
  CHECK(overridden.scenario.spec.traffic(7) == 123);
}

TEST_CASE("missing config files fail cleanly") {
  CHECK_THROWS_AS(parse_config("/nonexistent/path/config.json"), ConfigError);
  CHECK(error_of("{not json").find("invalid JSON") != std::string::npos);
}

TEST_CASE("format_double round-trips through 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, 12345.6789, 1e-9, 0.0, -2.5e17}) {
    const std::string text = format_double(v);
    CHECK(std::stod(text) == v);
  }
}

TEST_CASE("run_config outputs are deterministic across thread counts") {
  ExperimentConfig config = parse_config_text(
      R"({"scenario": "stationary2", "policies": ["cgse", "uniform"],
          "horizon": 6, "daily_traffic": 400, "replications": 6,
          "master_seed": 9, "emit_traces": true})");

  const fs::path dir_a = fs::path("cli_test_out") / "a";
  const fs::path dir_b = fs::path("cli_test_out") / "b";
  fs::remove_all("cli_test_out");

  config.output_dir = dir_a.string();
  config.threads = 1;
  REQUIRE(run_config(config) == 0);
  config.output_dir = dir_b.string();
  config.threads = 2;
  REQUIRE(run_config(config) == 0);

  REQUIRE(fs::exists(dir_a / "report.json"));
  CHECK(slurp(dir_a / "report.json") == slurp(dir_b / "report.json"));
  int csv_count = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    if (entry.path().extension() == ".csv") {
      csv_count++;
      CHECK(slurp(entry.path()) == slurp(dir_b / entry.path().filename()));
    }
  }
  CHECK(csv_count == 2 * 2 * 6);  // trace + bounds per policy per rep
  fs::remove_all("cli_test_out");
}

TEST_CASE("trace csv carries the documented columns") {
  ExperimentConfig config = parse_config_text(
      R"({"scenario": "stationary2", "policies": ["cgse"],
          "horizon": 4, "daily_traffic": 300, "replications": 1,
          "master_seed": 4, "emit_traces": true,
          "output_dir": "cli_csv_out"})");
  fs::remove_all("cli_csv_out");
  REQUIRE(run_config(config) == 0);
  const std::string trace = slurp(fs::path("cli_csv_out") / "trace_cgse_rep0.csv");
  CHECK(trace.rfind("day,arm,propensity,impressions,rewards,g_hat,g_rate,"
                    "v_hat_min_pair,active\n", 0) == 0);
  const std::string bounds =
      slurp(fs::path("cli_csv_out") / "bounds_cgse_rep0.csv");
  CHECK(bounds.rfind("day,i,j,estimate,radius,lower,upper,frozen\n", 0) == 0);
  const std::string report = slurp(fs::path("cli_csv_out") / "report.json");
  CHECK(report.find("\"oracle_best_arm\":2") != std::string::npos);

  // The report must be well-formed JSON with the documented shape.
  const nlohmann::json parsed = nlohmann::json::parse(report);
  CHECK(parsed["scenario"]["arm_count"] == 2);
  CHECK(parsed["delta"] == 0.1);
  REQUIRE(parsed["policies"].size() == 1);
  CHECK(parsed["policies"][0]["name"] == "cgse");
  CHECK(parsed["policies"][0]["runs"].size() == 1);
  CHECK(parsed["policies"][0]["mean_regret_curve"].size() == 4);
  CHECK(parsed["paradox"].is_null());
  fs::remove_all("cli_csv_out");
}

TEST_CASE("the simpsons scenario report embeds the paradox summary") {
  ExperimentConfig config = parse_config_text(
      R"({"scenario": "simpsons", "policies": ["uniform"],
          "replications": 2, "output_dir": "cli_paradox_out"})");
  fs::remove_all("cli_paradox_out");
  REQUIRE(run_config(config) == 0);
  const std::string report = slurp(fs::path("cli_paradox_out") / "report.json");
  CHECK(report.find("\"paradox_present\":true") != std::string::npos);
  CHECK(report.find("\"pooled_winner\":1") != std::string::npos);
  CHECK(report.find("\"cg_winner\":2") != std::string::npos);
  fs::remove_all("cli_paradox_out");
}
