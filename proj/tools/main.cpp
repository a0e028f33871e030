#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "adexp/config.hpp"
#include "adexp/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Adaptive experimentation over time-varying Bernoulli environments: "
      "counterfactual gain estimation, always-valid gap bounds, and "
      "elimination policies"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;

  CLI::App* run = app.add_subcommand("run", "run the experiments in a config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--replications", replications,
                  "override the replication count");
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--threads", threads,
                  "worker threads (0 = hardware concurrency)");

  CLI::App* list =
      app.add_subcommand("list-scenarios", "print the scenario catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const adexp::ScenarioInfo& info : adexp::scenario_catalog()) {
        std::cout << info.name << "  arms=" << info.arm_count
                  << " horizon=" << info.default_horizon
                  << " daily_traffic=" << info.default_daily_traffic << "\n    "
                  << info.description << "\n";
      }
      return 0;
    }
    adexp::ExperimentConfig config = adexp::parse_config(config_path);
    if (replications) config.replications = *replications;
    if (seed) config.master_seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    if (threads) config.threads = *threads;
    if (config.replications < 1) {
      std::cerr << "error: --replications must be >= 1\n";
      return 1;
    }
    return adexp::run_config(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
