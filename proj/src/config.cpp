#include "adexp/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace adexp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      fail(path + "." + item.key(), "unknown key");
    }
  }
}

double get_number(const json& obj, const std::string& path) {
  if (!obj.is_number()) fail(path, "expected a number");
  return obj.get<double>();
}

int get_int(const json& obj, const std::string& path) {
  if (!obj.is_number_integer()) fail(path, "expected an integer");
  return obj.get<int>();
}

bool get_bool(const json& obj, const std::string& path) {
  if (!obj.is_boolean()) fail(path, "expected a boolean");
  return obj.get<bool>();
}

std::vector<std::int64_t> get_traffic(const json& node,
                                      const std::string& path) {
  std::vector<std::int64_t> traffic;
  if (node.is_number_integer()) {
    traffic.push_back(node.get<std::int64_t>());
  } else if (node.is_array()) {
    if (node.empty()) fail(path, "traffic list must be nonempty");
    for (std::size_t t = 0; t < node.size(); ++t) {
      const std::string p = path + "[" + std::to_string(t) + "]";
      if (!node[t].is_number_integer()) fail(p, "expected an integer");
      traffic.push_back(node[t].get<std::int64_t>());
    }
  } else {
    fail(path, "expected an integer or a list of integers");
  }
  for (std::size_t t = 0; t < traffic.size(); ++t) {
    if (traffic[t] <= 0) {
      fail(path + "[" + std::to_string(t) + "]", "traffic must be positive");
    }
  }
  return traffic;
}

Scenario parse_scenario(const json& node, std::optional<int> horizon,
                        std::optional<std::vector<std::int64_t>> traffic) {
  if (node.is_string()) {
    try {
      return make_scenario(node.get<std::string>(), horizon,
                           std::move(traffic));
    } catch (const std::invalid_argument& e) {
      fail("$.scenario", e.what());
    }
  }
  if (!node.is_object()) {
    fail("$.scenario", "expected a scenario name or an inline means object");
  }
  require_keys(node, "$.scenario", {"means", "traffic"});
  if (!node.contains("means")) fail("$.scenario.means", "missing");
  const json& means_node = node["means"];
  if (!means_node.is_array() || means_node.empty()) {
    fail("$.scenario.means", "expected a nonempty list of per-arm mean rows");
  }
  std::vector<std::vector<double>> means;
  for (std::size_t i = 0; i < means_node.size(); ++i) {
    const std::string row_path = "$.scenario.means[" + std::to_string(i) + "]";
    if (!means_node[i].is_array() || means_node[i].empty()) {
      fail(row_path, "expected a nonempty list of daily means");
    }
    std::vector<double> row;
    for (std::size_t t = 0; t < means_node[i].size(); ++t) {
      const std::string p = row_path + "[" + std::to_string(t) + "]";
      if (!means_node[i][t].is_number()) fail(p, "expected a number");
      const double mu = means_node[i][t].get<double>();
      if (!(mu >= EnvironmentSpec::kMeanFloor &&
            mu <= 1.0 - EnvironmentSpec::kMeanFloor)) {
        fail(p, "mean must lie in [1e-6, 1 - 1e-6]");
      }
      row.push_back(mu);
    }
    means.push_back(std::move(row));
  }
  const int T = static_cast<int>(means.front().size());
  if (horizon.has_value() && *horizon != T) {
    fail("$.horizon", "conflicts with the inline means horizon");
  }
  std::vector<std::int64_t> resolved_traffic;
  if (node.contains("traffic")) {
    resolved_traffic = get_traffic(node["traffic"], "$.scenario.traffic");
  } else if (traffic.has_value()) {
    resolved_traffic = std::move(*traffic);
  } else {
    fail("$.scenario.traffic", "missing (no daily_traffic given either)");
  }
  if (resolved_traffic.size() == 1) {
    resolved_traffic.assign(T, resolved_traffic[0]);
  }
  Scenario s;
  s.name = "custom";
  s.description = "inline means matrix";
  s.kind.tag = ScenarioTag::kCustom;
  try {
    s.spec = EnvironmentSpec::create(std::move(means),
                                     std::move(resolved_traffic));
  } catch (const std::invalid_argument& e) {
    fail("$.scenario", e.what());
  }
  return s;
}

PolicyKind parse_policy(const json& node, const std::string& path) {
  PolicyKind kind;
  std::string name;
  if (node.is_string()) {
    name = node.get<std::string>();
  } else if (node.is_object()) {
    require_keys(node, path, {"kind", "posterior_samples", "beta", "delta"});
    if (!node.contains("kind") || !node["kind"].is_string()) {
      fail(path + ".kind", "expected a policy name");
    }
    name = node["kind"].get<std::string>();
  } else {
    fail(path, "expected a policy name or object");
  }
  const std::optional<PolicyTag> tag = policy_from_name(name);
  if (!tag.has_value()) {
    fail(path, "unknown policy '" + name +
                   "' (expected cgse, ts, ttts, uniform, or bob)");
  }
  kind.tag = *tag;
  if (node.is_object()) {
    if (node.contains("posterior_samples")) {
      if (kind.tag != PolicyTag::kTs && kind.tag != PolicyTag::kTtts) {
        fail(path + ".posterior_samples", "only valid for ts/ttts");
      }
      kind.ts_posterior_samples = get_int(node["posterior_samples"],
                                          path + ".posterior_samples");
      if (kind.ts_posterior_samples < 1) {
        fail(path + ".posterior_samples", "must be >= 1");
      }
    }
    if (node.contains("beta")) {
      if (kind.tag != PolicyTag::kTtts) fail(path + ".beta", "only valid for ttts");
      kind.ttts_beta = get_number(node["beta"], path + ".beta");
      if (!(kind.ttts_beta > 0.0 && kind.ttts_beta < 1.0)) {
        fail(path + ".beta", "must lie in (0, 1)");
      }
    }
    if (node.contains("delta")) {
      if (kind.tag != PolicyTag::kCgse) fail(path + ".delta", "only valid for cgse");
      const double d = get_number(node["delta"], path + ".delta");
      if (!(d > 0.0 && d < 1.0)) fail(path + ".delta", "must lie in (0, 1)");
      kind.cgse_delta = d;
    }
  }
  return kind;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("$: expected a JSON object");
  require_keys(root, "$",
               {"scenario", "policies", "delta", "rho", "replications",
                "master_seed", "horizon", "daily_traffic", "output_dir",
                "continue_after_stop", "emit_traces", "threads"});

  ExperimentConfig config;
  std::optional<int> horizon;
  std::optional<std::vector<std::int64_t>> traffic;
  if (root.contains("horizon")) {
    horizon = get_int(root["horizon"], "$.horizon");
    if (*horizon < 1) fail("$.horizon", "must be >= 1");
  }
  if (root.contains("daily_traffic")) {
    traffic = get_traffic(root["daily_traffic"], "$.daily_traffic");
  }
  if (!root.contains("scenario")) fail("$.scenario", "missing");
  config.scenario =
      parse_scenario(root["scenario"], horizon, std::move(traffic));

  if (!root.contains("policies")) fail("$.policies", "missing");
  if (!root["policies"].is_array() || root["policies"].empty()) {
    fail("$.policies", "expected a nonempty list");
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < root["policies"].size(); ++i) {
    const std::string path = "$.policies[" + std::to_string(i) + "]";
    PolicyEntry entry;
    entry.kind = parse_policy(root["policies"][i], path);
    entry.label = policy_name(entry.kind.tag);
    int suffix = 1;
    while (std::find(labels.begin(), labels.end(), entry.label) !=
           labels.end()) {
      suffix++;
      entry.label = policy_name(entry.kind.tag) + "." + std::to_string(suffix);
    }
    labels.push_back(entry.label);
    config.policies.push_back(std::move(entry));
  }

  if (root.contains("delta")) {
    config.delta = get_number(root["delta"], "$.delta");
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
      fail("$.delta", "must lie in (0, 1)");
    }
  }
  if (root.contains("rho")) {
    config.rho = get_number(root["rho"], "$.rho");
    if (!(config.rho > 0.0)) fail("$.rho", "must be positive");
  }
  if (root.contains("replications")) {
    config.replications = get_int(root["replications"], "$.replications");
    if (config.replications < 1) fail("$.replications", "must be >= 1");
  }
  if (root.contains("master_seed")) {
    if (!root["master_seed"].is_number_unsigned() &&
        !root["master_seed"].is_number_integer()) {
      fail("$.master_seed", "expected an integer");
    }
    config.master_seed = root["master_seed"].get<std::uint64_t>();
  }
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string()) fail("$.output_dir", "expected a string");
    config.output_dir = root["output_dir"].get<std::string>();
  }
  if (root.contains("continue_after_stop")) {
    config.continue_after_stop =
        get_bool(root["continue_after_stop"], "$.continue_after_stop");
  }
  if (root.contains("emit_traces")) {
    config.emit_traces = get_bool(root["emit_traces"], "$.emit_traces");
  }
  if (root.contains("threads")) {
    config.threads = get_int(root["threads"], "$.threads");
    if (config.threads < 0) fail("$.threads", "must be >= 0");
  }
  return config;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace adexp
