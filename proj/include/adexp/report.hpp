#pragma once

#include <string>

#include "adexp/config.hpp"
#include "adexp/harness.hpp"

namespace adexp {

// Executes every policy in the config and writes report.json (plus per-run
// trace and gap-bound CSVs when emit_traces is set) under output_dir.
// Outputs are deterministic functions of the config, including the seed and
// independent of the thread count. Returns the process exit code.
int run_config(const ExperimentConfig& config);

// %.17g, so every double round-trips exactly.
std::string format_double(double value);

// Serialized forms, exposed for regression tests.
std::string render_report_json(const ExperimentConfig& config,
                               const std::vector<MonteCarloReport>& reports);
std::string render_trace_csv(const ExperimentTrace& trace);
std::string render_bounds_csv(const ExperimentTrace& trace);

}  // namespace adexp
