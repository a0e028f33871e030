#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "adexp/policies.hpp"
#include "adexp/scenarios.hpp"

namespace adexp {

// Schema or validation failure; the message names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyEntry {
  std::string label;  // unique within the config ("cgse", "cgse.2", ...)
  PolicyKind kind;
};

struct ExperimentConfig {
  Scenario scenario;               // resolved and validated at parse time
  std::vector<PolicyEntry> policies;
  double delta = 0.1;
  double rho = 1.0;
  int replications = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  bool continue_after_stop = false;
  bool emit_traces = false;
  int threads = 0;                 // 0 = hardware concurrency
};

// Parses and validates a config file. Strict: unknown keys anywhere are
// rejected, every violation names its field path, and the scenario resolves
// to a well-formed environment before anything runs. Throws ConfigError.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace adexp
