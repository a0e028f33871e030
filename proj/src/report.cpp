#include "adexp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adexp {

namespace {

// Arms are 0-based in the API; files display them 1-based.
int display_arm(int arm) { return arm + 1; }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

// Insertion-ordered JSON emitter with deterministic number formatting.
class JsonWriter {
 public:
  std::string str() const { return out_.str(); }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& name) {
    comma();
    out_ << '"' << json_escape(name) << "\":";
    pending_value_ = true;
  }

  void value(double v) { item(format_double(v)); }
  void value(int v) { item(std::to_string(v)); }
  void value(std::int64_t v) { item(std::to_string(v)); }
  void value(std::uint64_t v) { item(std::to_string(v)); }
  void value(bool v) { item(v ? "true" : "false"); }
  void value(const std::string& v) { item('"' + json_escape(v) + '"'); }
  void value(const char* v) { item('"' + json_escape(v) + '"'); }
  void null() { item("null"); }

  template <typename T>
  void optional_value(const std::optional<T>& v) {
    if (v.has_value()) value(*v);
    else null();
  }

 private:
  void open(char c) {
    comma();
    out_ << c;
    needs_comma_.push_back(false);
    pending_value_ = false;
  }
  void close(char c) {
    out_ << c;
    needs_comma_.pop_back();
    if (!needs_comma_.empty()) needs_comma_.back() = true;
  }
  void comma() {
    if (pending_value_) return;
    if (!needs_comma_.empty()) {
      if (needs_comma_.back()) out_ << ',';
      needs_comma_.back() = true;
    }
  }
  void item(const std::string& text) {
    comma();
    out_ << text;
    if (!needs_comma_.empty() && pending_value_) needs_comma_.back() = true;
    pending_value_ = false;
  }

  std::ostringstream out_;
  std::vector<bool> needs_comma_;
  bool pending_value_ = false;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_curve(JsonWriter& w, const std::vector<double>& curve) {
  w.begin_array();
  for (double v : curve) w.value(v);
  w.end_array();
}

void write_paradox(JsonWriter& w, const ParadoxReport& paradox) {
  w.begin_object();
  w.key("paradox_present");
  w.value(paradox.paradox_present);
  w.key("daily_winner_counts");
  w.begin_array();
  for (int c : paradox.daily_winner_counts) w.value(c);
  w.end_array();
  w.key("everyday_winner");
  if (paradox.everyday_winner) w.value(display_arm(*paradox.everyday_winner));
  else w.null();
  w.key("pooled_winner");
  if (paradox.pooled_winner) w.value(display_arm(*paradox.pooled_winner));
  else w.null();
  w.key("cg_winner");
  if (paradox.cg_winner) w.value(display_arm(*paradox.cg_winner));
  else w.null();
  w.end_object();
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string render_report_json(const ExperimentConfig& config,
                               const std::vector<MonteCarloReport>& reports) {
  const EnvironmentSpec& spec = config.scenario.spec;
  const AssumptionReport assumptions = verify_assumptions(spec);

  JsonWriter w;
  w.begin_object();
  w.key("scenario");
  w.begin_object();
  w.key("name");
  w.value(config.scenario.name);
  w.key("description");
  w.value(config.scenario.description);
  w.key("arm_count");
  w.value(spec.arm_count());
  w.key("horizon");
  w.value(spec.horizon());
  w.key("total_traffic");
  w.value(spec.total_traffic(spec.horizon()));
  w.key("oracle_best_arm");
  if (assumptions.best_arm) w.value(display_arm(*assumptions.best_arm));
  else w.null();
  w.key("assumption1_holds");
  w.value(assumptions.assumption1_holds);
  w.key("assumption2_t0");
  w.optional_value(assumptions.t0);
  w.key("assumption2_epsilon");
  w.optional_value(assumptions.epsilon);
  w.end_object();

  w.key("delta");
  w.value(config.delta);
  w.key("rho");
  w.value(config.rho);
  w.key("replications");
  w.value(config.replications);
  w.key("master_seed");
  w.value(config.master_seed);
  w.key("continue_after_stop");
  w.value(config.continue_after_stop);

  w.key("policies");
  w.begin_array();
  for (std::size_t p = 0; p < reports.size(); ++p) {
    const MonteCarloReport& report = reports[p];
    w.begin_object();
    w.key("name");
    w.value(config.policies[p].label);
    w.key("identified_fraction");
    w.value(report.identified_fraction);
    w.key("correctness_rate");
    w.value(report.correctness_rate);
    w.key("mean_regret_at_stop");
    w.value(report.mean_regret_at_stop);
    w.key("best_eliminated_fraction");
    w.value(report.best_eliminated_fraction);
    w.key("mean_regret_curve");
    write_curve(w, report.mean_regret_curve);
    w.key("identification_probability_by_day");
    write_curve(w, report.identification_probability);
    w.key("runs");
    w.begin_array();
    for (const RunSummary& run : report.runs) {
      w.begin_object();
      w.key("replication");
      w.value(run.replication_id);
      w.key("stop_day");
      w.optional_value(run.stop_day);
      w.key("identified_arm");
      if (run.identified_arm) w.value(display_arm(*run.identified_arm));
      else w.null();
      w.key("correct");
      w.optional_value(run.correct);
      w.key("total_reward");
      w.value(run.total_reward);
      w.key("final_regret");
      w.value(run.regret_by_day.empty() ? 0.0 : run.regret_by_day.back());
      w.key("regret_at_stop");
      w.value(run.stop_day.has_value() ? run.regret_by_day[*run.stop_day - 1]
              : run.regret_by_day.empty() ? 0.0
                                          : run.regret_by_day.back());
      w.key("excluded_days");
      w.value(run.monitor_excluded_days);
      w.key("tie_days");
      w.value(run.monitor_tie_days);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();

  w.key("paradox");
  if (config.scenario.kind.tag == ScenarioTag::kSimpsonsParadox) {
    write_paradox(w, simpsons_paradox_check(simpsons_scripted_trace()));
  } else {
    w.null();
  }
  w.end_object();
  return w.str() + "\n";
}

std::string render_trace_csv(const ExperimentTrace& trace) {
  std::ostringstream out;
  out << "day,arm,propensity,impressions,rewards,g_hat,g_rate,"
         "v_hat_min_pair,active\n";
  if (trace.days.empty()) return out.str();
  const int k = static_cast<int>(trace.days.front().impressions.size());
  std::vector<double> g_hat(k, 0.0);
  std::int64_t traffic = 0;
  for (std::size_t d = 0; d < trace.days.size(); ++d) {
    const DayObservation& obs = trace.days[d];
    traffic += obs.total_impressions();
    for (int i = 0; i < k; ++i) {
      if (obs.propensities[i] >= kPropensityFloor) {
        g_hat[i] +=
            static_cast<double>(obs.rewards[i]) / obs.propensities[i];
      }
      double min_var = 0.0;
      bool seen = false;
      for (const GapBound& b : trace.bounds[d]) {
        if (b.i != i) continue;
        if (!seen || b.variance < min_var) {
          min_var = b.variance;
          seen = true;
        }
      }
      const auto& active = trace.active_sets[d];
      const bool is_active =
          std::find(active.begin(), active.end(), i) != active.end();
      out << obs.day << ',' << display_arm(i) << ','
          << format_double(obs.propensities[i]) << ',' << obs.impressions[i]
          << ',' << obs.rewards[i] << ',' << format_double(g_hat[i]) << ','
          << format_double(g_hat[i] / static_cast<double>(traffic)) << ','
          << format_double(min_var) << ',' << (is_active ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::string render_bounds_csv(const ExperimentTrace& trace) {
  std::ostringstream out;
  out << "day,i,j,estimate,radius,lower,upper,frozen\n";
  for (std::size_t d = 0; d < trace.days.size(); ++d) {
    for (const GapBound& b : trace.bounds[d]) {
      out << trace.days[d].day << ',' << display_arm(b.i) << ','
          << display_arm(b.j) << ',' << format_double(b.estimate) << ','
          << format_double(b.radius) << ',' << format_double(b.lower) << ','
          << format_double(b.upper) << ',' << (b.frozen ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

int run_config(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  ConfidenceConfig confidence;
  confidence.delta = config.delta;
  confidence.rho = config.rho;
  confidence.union_bound_k = config.scenario.spec.arm_count();
  RunFlags flags;
  flags.continue_after_stop = config.continue_after_stop;

  std::vector<MonteCarloReport> reports;
  reports.reserve(config.policies.size());
  for (const PolicyEntry& entry : config.policies) {
    RunSink sink;
    if (config.emit_traces) {
      const std::string label = entry.label;
      sink = [&out_dir, label](const ExperimentTrace& trace,
                               const RunSummary& summary) {
        const std::string stem =
            label + "_rep" + std::to_string(summary.replication_id);
        write_file(out_dir / ("trace_" + stem + ".csv"),
                   render_trace_csv(trace));
        write_file(out_dir / ("bounds_" + stem + ".csv"),
                   render_bounds_csv(trace));
      };
    }
    reports.push_back(run_monte_carlo(
        config.scenario.spec, entry.kind, confidence, config.replications,
        config.master_seed, flags, config.threads, sink));
  }
  write_file(out_dir / "report.json", render_report_json(config, reports));
  return 0;
}

}  // namespace adexp
