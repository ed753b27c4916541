#include "tradelab/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <sstream>

namespace tradelab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

std::uint64_t as_count(const json& value, const std::string& field, bool allow_zero = false) {
  if (!value.is_number_integer()) fail(field, "expected a positive integer");
  if (value.is_number_unsigned()) {
    const auto v = value.get<std::uint64_t>();
    if (v == 0 && !allow_zero) fail(field, "expected a positive integer");
    return v;
  }
  const auto v = value.get<std::int64_t>();
  if (v < 0 || (v == 0 && !allow_zero)) fail(field, "expected a positive integer");
  return static_cast<std::uint64_t>(v);
}

double as_number(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "expected a number");
  return value.get<double>();
}

std::string as_string(const json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "expected a string");
  return value.get<std::string>();
}

bool as_bool(const json& value, const std::string& field) {
  if (!value.is_boolean()) fail(field, "expected true or false");
  return value.get<bool>();
}

std::vector<std::uint64_t> as_counts(const json& value, const std::string& field) {
  std::vector<std::uint64_t> out;
  if (value.is_array()) {
    if (value.empty()) fail(field, "expected a non-empty list of positive integers");
    for (std::size_t i = 0; i < value.size(); ++i) {
      out.push_back(as_count(value[i], field + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(as_count(value, field));
  }
  return out;
}

// "auto" or a positive integer.
template <class T>
std::optional<T> as_tuned(const json& value, const std::string& field) {
  if (value.is_string()) {
    if (value.get<std::string>() != "auto") fail(field, "expected \"auto\" or a positive integer");
    return std::nullopt;
  }
  return static_cast<T>(as_count(value, field));
}

const json* lookup(const json& obj, std::initializer_list<const char*> names,
                   const std::string& prefix, std::string& used) {
  const json* found = nullptr;
  for (const char* name : names) {
    if (obj.contains(name)) {
      if (found != nullptr) fail(join(prefix, name), "given twice under different names");
      found = &obj.at(name);
      used = name;
    }
  }
  return found;
}

EnvSpec parse_env(const json& node, const json& experiment, const std::string& prefix) {
  const std::string field = join(prefix, "env");
  EnvSpec spec;
  if (node.is_string()) {
    spec.family = node.get<std::string>();
    // Parameters may sit next to "env" in the experiment object.
    for (const char* key : {"eps", "lambda", "x", "probe_budget"}) {
      if (experiment.contains(key)) spec.params[key] = as_number(experiment.at(key), join(prefix, key));
    }
  } else if (node.is_object()) {
    if (!node.contains("family")) fail(field + ".family", "missing");
    spec.family = as_string(node.at("family"), field + ".family");
    for (const auto& [key, value] : node.items()) {
      if (key == "family") continue;
      spec.params[key] = as_number(value, field + "." + key);
    }
  } else {
    fail(field, "expected a family name or an object");
  }
  const auto& families = environment_families();
  if (std::find(families.begin(), families.end(), spec.family) == families.end()) {
    std::string names;
    for (const auto& f : families) names += (names.empty() ? "" : ", ") + f;
    fail(field, "unknown family '" + spec.family + "' (expected one of " + names + ")");
  }
  const auto allowed = environment_parameters(spec.family);
  for (const auto& [key, value] : spec.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(field + "." + key, "not a parameter of " + spec.family);
    }
  }
  return spec;
}

AlgoSpec parse_algo(const json& node, const std::string& prefix) {
  const std::string field = join(prefix, "algo");
  AlgoSpec algo;
  if (node.is_string()) {
    algo.family = node.get<std::string>();
  } else if (node.is_object()) {
    if (!node.contains("family")) fail(field + ".family", "missing");
    for (const auto& [key, value] : node.items()) {
      const std::string f = field + "." + key;
      if (key == "family") {
        algo.family = as_string(value, f);
      } else if (key == "exploration_rounds" || key == "T0") {
        algo.exploration_rounds = as_tuned<std::uint64_t>(value, f);
      } else if (key == "grid_size" || key == "K") {
        algo.grid_size = as_tuned<std::size_t>(value, f);
      } else if (key == "density_bound" || key == "M") {
        algo.density_bound = as_number(value, f);
        if (!(*algo.density_bound > 0.0)) fail(f, "expected a positive number");
      } else if (key == "bandit") {
        algo.bandit = as_string(value, f);
        if (algo.bandit != "moss" && algo.bandit != "ucb1") fail(f, "expected \"moss\" or \"ucb1\"");
      } else if (key == "price") {
        algo.price = as_number(value, f);
        if (!(*algo.price >= 0.0 && *algo.price <= 1.0)) fail(f, "expected a price in [0,1]");
      } else if (key == "horizon") {
        const std::string mode = as_string(value, f);
        if (mode != "known" && mode != "unknown") fail(f, "expected \"known\" or \"unknown\"");
        algo.known_horizon = mode == "known";
      } else if (key == "adapt_feedback") {
        algo.adapt_feedback = as_bool(value, f);
      } else {
        fail(f, "unknown field");
      }
    }
  } else {
    fail(field, "expected a family name or an object");
  }
  const auto& families = algorithm_families();
  if (std::find(families.begin(), families.end(), algo.family) == families.end()) {
    std::string names;
    for (const auto& f : families) names += (names.empty() ? "" : ", ") + f;
    fail(field, "unknown family '" + algo.family + "' (expected one of " + names + ")");
  }
  if (algo.family == "fixed_price" && !algo.price) fail(field + ".price", "required for fixed_price");
  return algo;
}

const std::vector<std::string>& experiment_keys() {
  static const std::vector<std::string> keys{
      "name",     "env",          "algo",        "feedback",           "T",
      "horizons", "reps",         "replications", "seed",              "master_seed",
      "checkpoints", "bound_density", "lower_bound_regime", "empirical_regret", "eps",
      "lambda",   "x",            "probe_budget"};
  return keys;
}

ExperimentConfig parse_experiment(const json& node, const std::string& prefix,
                                  const std::string& default_name,
                                  const std::vector<std::string>& extra_keys) {
  if (!node.is_object()) fail(prefix.empty() ? "config" : prefix, "expected an object");
  const auto& keys = experiment_keys();
  for (const auto& [key, value] : node.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end() &&
        std::find(extra_keys.begin(), extra_keys.end(), key) == extra_keys.end()) {
      fail(join(prefix, key), "unknown field");
    }
  }

  ExperimentConfig cfg;
  cfg.name = node.contains("name") ? as_string(node.at("name"), join(prefix, "name")) : default_name;
  if (cfg.name.empty() ||
      cfg.name.find_first_of("/\\,\n\"") != std::string::npos) {
    fail(join(prefix, "name"), "must be non-empty without slashes, commas, quotes or newlines");
  }
  if (!node.contains("env")) fail(join(prefix, "env"), "missing");
  cfg.env = parse_env(node.at("env"), node, prefix);
  if (!node.contains("algo")) fail(join(prefix, "algo"), "missing");
  cfg.algo = parse_algo(node.at("algo"), prefix);
  if (node.is_object() && node.at("env").is_object()) {
    for (const char* key : {"eps", "lambda", "x", "probe_budget"}) {
      if (node.contains(key)) fail(join(prefix, key), "belongs inside the env object");
    }
  }
  if (node.contains("feedback")) {
    const std::string text = as_string(node.at("feedback"), join(prefix, "feedback"));
    try {
      cfg.feedback = parse_feedback_kind(text);
    } catch (const std::exception&) {
      fail(join(prefix, "feedback"),
           "unknown kind '" + text + "' (expected full, realistic, trade_bit or none)");
    }
  }

  std::string used;
  const json* horizons = lookup(node, {"T", "horizons"}, prefix, used);
  if (horizons == nullptr) fail(join(prefix, "T"), "missing");
  cfg.horizons = as_counts(*horizons, join(prefix, used));
  for (std::size_t i = 1; i < cfg.horizons.size(); ++i) {
    if (cfg.horizons[i] <= cfg.horizons[i - 1]) {
      fail(join(prefix, used), "horizons must be strictly increasing");
    }
  }
  if (const json* reps = lookup(node, {"reps", "replications"}, prefix, used)) {
    cfg.replications = static_cast<std::size_t>(as_count(*reps, join(prefix, used)));
  }
  if (const json* seed = lookup(node, {"seed", "master_seed"}, prefix, used)) {
    cfg.master_seed = as_count(*seed, join(prefix, used), true);
  }
  if (node.contains("checkpoints")) {
    cfg.checkpoints = as_counts(node.at("checkpoints"), join(prefix, "checkpoints"));
  }
  if (node.contains("bound_density")) {
    cfg.bound_density = as_number(node.at("bound_density"), join(prefix, "bound_density"));
  }
  if (node.contains("lower_bound_regime")) {
    cfg.lower_bound_regime =
        as_string(node.at("lower_bound_regime"), join(prefix, "lower_bound_regime"));
  }
  if (node.contains("empirical_regret")) {
    cfg.empirical_regret = as_bool(node.at("empirical_regret"), join(prefix, "empirical_regret"));
  }
  return cfg;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON (") + e.what() + ")");
  }
  if (!root.is_object()) fail("config", "expected a JSON object");

  RunConfig run;
  if (root.contains("schema_version")) {
    const json& v = root.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
      fail("schema_version", "unsupported (this build reads version " +
                                 std::to_string(kSchemaVersion) + ")");
    }
  }
  if (root.contains("output_dir")) run.output_dir = as_string(root.at("output_dir"), "output_dir");

  if (root.contains("experiments")) {
    for (const auto& [key, value] : root.items()) {
      if (key != "schema_version" && key != "output_dir" && key != "experiments" &&
          key != "description") {
        fail(key, "unknown top-level field");
      }
    }
    const json& list = root.at("experiments");
    if (!list.is_array() || list.empty()) fail("experiments", "expected a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string prefix = "experiments[" + std::to_string(i) + "]";
      run.experiments.push_back(
          parse_experiment(list[i], prefix, "experiment_" + std::to_string(i), {}));
    }
  } else {
    run.experiments.push_back(parse_experiment(
        root, "", "experiment", {"schema_version", "output_dir", "description"}));
  }
  std::vector<std::string> names;
  for (const auto& e : run.experiments) {
    if (std::find(names.begin(), names.end(), e.name) != names.end()) {
      fail("experiments", "duplicate experiment name '" + e.name + "'");
    }
    names.push_back(e.name);
  }
  return run;
}

namespace {

json parse_spec_value(const std::string& text, const std::string& field) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] != '{' && text[first] != '"') {
    return json(text.substr(first, text.find_last_not_of(" \t\r\n") - first + 1));
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(field + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace

EnvSpec parse_env_spec(const std::string& text) {
  return parse_env(parse_spec_value(text, "env"), json::object(), "");
}

AlgoSpec parse_algo_spec(const std::string& text) {
  return parse_algo(parse_spec_value(text, "algo"), "");
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

}  // namespace tradelab
