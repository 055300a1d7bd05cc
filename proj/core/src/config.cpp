#include "dpzo/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dpzo/errors.hpp"

namespace dpzo {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (allowed.count(item.key()) == 0) {
      throw ConfigError("config: unknown field '" + item.key() + "' in " +
                        where);
    }
  }
}

const json& require(const json& obj, const std::string& where,
                    const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("config: missing field '" + key + "' in " + where);
  }
  return *it;
}

double as_number(const json& value, const std::string& what) {
  if (!value.is_number()) {
    throw ConfigError("config: field '" + what + "' must be a number");
  }
  return value.get<double>();
}

// Numbers that may be the string "inf".
double as_number_or_inf(const json& value, const std::string& what) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw ConfigError("config: field '" + what + "' must be a number or \"inf\"");
  }
  return as_number(value, what);
}

uint64_t as_uint(const json& value, const std::string& what) {
  if (!value.is_number_unsigned()) {
    throw ConfigError("config: field '" + what +
                      "' must be a non-negative integer");
  }
  return value.get<uint64_t>();
}

bool as_bool(const json& value, const std::string& what) {
  if (!value.is_boolean()) {
    throw ConfigError("config: field '" + what + "' must be a boolean");
  }
  return value.get<bool>();
}

std::string as_string(const json& value, const std::string& what) {
  if (!value.is_string()) {
    throw ConfigError("config: field '" + what + "' must be a string");
  }
  return value.get<std::string>();
}

ObjectiveConfig parse_objective(const json& obj) {
  ObjectiveConfig cfg;
  cfg.name = as_string(require(obj, "objective", "name"), "objective.name");
  if (cfg.name == "quadratic") {
    reject_unknown(obj, "objective", {"name", "d", "condition_number"});
    cfg.d = as_uint(require(obj, "objective", "d"), "objective.d");
    cfg.condition_number = as_number(
        require(obj, "objective", "condition_number"), "condition_number");
  } else if (cfg.name == "lipschitz_norm") {
    reject_unknown(obj, "objective", {"name", "d", "L"});
    cfg.d = as_uint(require(obj, "objective", "d"), "objective.d");
    cfg.L = as_number(require(obj, "objective", "L"), "objective.L");
  } else if (cfg.name == "weakly_convex_logistic") {
    reject_unknown(obj, "objective", {"name", "d", "n", "rho", "data_csv"});
    cfg.d = as_uint(require(obj, "objective", "d"), "objective.d");
    cfg.n = as_uint(require(obj, "objective", "n"), "objective.n");
    cfg.rho = as_number(require(obj, "objective", "rho"), "objective.rho");
    if (obj.contains("data_csv")) {
      cfg.data_csv = as_string(obj["data_csv"], "objective.data_csv");
    }
  } else if (cfg.name == "tiny_mlp") {
    reject_unknown(obj, "objective",
                   {"name", "layer_dims", "activation", "n", "data_csv"});
    const json& dims = require(obj, "objective", "layer_dims");
    if (!dims.is_array() || dims.size() < 3) {
      throw ConfigError(
          "config: objective.layer_dims must be an array of at least 3 dims");
    }
    for (const json& v : dims) {
      cfg.layer_dims.push_back(as_uint(v, "objective.layer_dims[]"));
    }
    cfg.activation =
        as_string(require(obj, "objective", "activation"), "activation");
    if (cfg.activation != "tanh" && cfg.activation != "relu") {
      throw ConfigError("config: activation must be 'tanh' or 'relu'");
    }
    cfg.n = as_uint(require(obj, "objective", "n"), "objective.n");
    if (obj.contains("data_csv")) {
      cfg.data_csv = as_string(obj["data_csv"], "objective.data_csv");
    }
  } else {
    throw ConfigError("config: unknown objective '" + cfg.name + "'");
  }
  return cfg;
}

ScheduleConfig parse_schedule(const json& obj) {
  reject_unknown(obj, "schedule",
                 {"beta0", "beta_end", "growth_k", "eta0", "T0", "lambda", "S",
                  "return_average"});
  ScheduleConfig cfg;
  cfg.beta0 = as_number(require(obj, "schedule", "beta0"), "schedule.beta0");
  if (obj.contains("beta_end") && obj.contains("growth_k")) {
    throw ConfigError("config: give schedule.beta_end or growth_k, not both");
  }
  if (obj.contains("beta_end")) {
    cfg.beta_end = as_number(obj["beta_end"], "schedule.beta_end");
  } else if (obj.contains("growth_k")) {
    cfg.growth_k = as_number(obj["growth_k"], "schedule.growth_k");
  } else {
    throw ConfigError("config: schedule needs beta_end or growth_k");
  }
  cfg.eta0 = as_number(require(obj, "schedule", "eta0"), "schedule.eta0");
  cfg.T0 = as_uint(require(obj, "schedule", "T0"), "schedule.T0");
  cfg.lambda =
      as_number_or_inf(require(obj, "schedule", "lambda"), "schedule.lambda");
  cfg.S = static_cast<uint32_t>(as_uint(require(obj, "schedule", "S"), "S"));
  if (obj.contains("return_average")) {
    cfg.return_average = as_bool(obj["return_average"], "return_average");
  }
  return cfg;
}

PrivacyConfig parse_privacy(const json& obj) {
  reject_unknown(obj, "privacy",
                 {"epsilon", "delta", "clip_C", "c1", "c2",
                  "sensitivity_multiplier"});
  PrivacyConfig cfg;
  cfg.epsilon =
      as_number_or_inf(require(obj, "privacy", "epsilon"), "privacy.epsilon");
  cfg.delta = as_number(require(obj, "privacy", "delta"), "privacy.delta");
  cfg.clip_C = as_number(require(obj, "privacy", "clip_C"), "privacy.clip_C");
  if (obj.contains("c1")) cfg.c1 = as_number(obj["c1"], "privacy.c1");
  if (obj.contains("c2")) cfg.c2 = as_number(obj["c2"], "privacy.c2");
  if (obj.contains("sensitivity_multiplier")) {
    cfg.sensitivity_multiplier =
        as_number(obj["sensitivity_multiplier"], "sensitivity_multiplier");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw ConfigError("config: privacy.delta must lie in (0, 1)");
  }
  if (!(cfg.epsilon > 0.0)) {
    throw ConfigError("config: privacy.epsilon must be positive");
  }
  if (!(cfg.clip_C > 0.0)) {
    throw ConfigError("config: privacy.clip_C must be positive");
  }
  return cfg;
}

EstimatorConfig parse_estimator(const json& obj) {
  reject_unknown(obj, "estimator", {"P", "m"});
  EstimatorConfig cfg;
  cfg.P = static_cast<uint32_t>(as_uint(require(obj, "estimator", "P"), "P"));
  cfg.m = static_cast<uint32_t>(as_uint(require(obj, "estimator", "m"), "m"));
  if (cfg.P == 0 || cfg.m == 0) {
    throw ConfigError("config: estimator.P and estimator.m must be positive");
  }
  return cfg;
}

PruningSection parse_pruning(const json& obj) {
  reject_unknown(obj, "pruning",
                 {"enabled", "r", "type", "A", "B", "P_prune", "beta_prune"});
  PruningSection cfg;
  cfg.enabled = as_bool(require(obj, "pruning", "enabled"), "pruning.enabled");
  cfg.r = as_number(require(obj, "pruning", "r"), "pruning.r");
  cfg.type = as_string(require(obj, "pruning", "type"), "pruning.type");
  if (cfg.type != "pruning-only" && cfg.type != "rank-based") {
    throw ConfigError("config: pruning.type must be pruning-only or rank-based");
  }
  if (obj.contains("A")) cfg.A = as_number(obj["A"], "pruning.A");
  if (obj.contains("B")) cfg.B = as_number(obj["B"], "pruning.B");
  cfg.P_prune = static_cast<uint32_t>(
      as_uint(require(obj, "pruning", "P_prune"), "P_prune"));
  cfg.beta_prune =
      as_number(require(obj, "pruning", "beta_prune"), "beta_prune");
  return cfg;
}

json number_or_inf(double value) {
  if (std::isinf(value)) return json("inf");
  return json(value);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: root must be an object");
  reject_unknown(root, "config root",
                 {"objective", "schedule", "privacy", "estimator", "pruning",
                  "reg_mode", "seed"});
  ExperimentConfig cfg;
  cfg.objective = parse_objective(require(root, "config root", "objective"));
  cfg.schedule = parse_schedule(require(root, "config root", "schedule"));
  cfg.privacy = parse_privacy(require(root, "config root", "privacy"));
  cfg.estimator = parse_estimator(require(root, "config root", "estimator"));
  if (root.contains("pruning")) {
    cfg.pruning = parse_pruning(root["pruning"]);
  }
  if (root.contains("reg_mode")) {
    cfg.reg_mode = as_string(root["reg_mode"], "reg_mode");
    if (cfg.reg_mode != "directional" && cfg.reg_mode != "paper-literal") {
      throw ConfigError("config: reg_mode must be directional or paper-literal");
    }
  }
  cfg.seed = as_uint(require(root, "config root", "seed"), "seed");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json objective;
  objective["name"] = cfg.objective.name;
  if (cfg.objective.name == "quadratic") {
    objective["d"] = cfg.objective.d;
    objective["condition_number"] = cfg.objective.condition_number;
  } else if (cfg.objective.name == "lipschitz_norm") {
    objective["d"] = cfg.objective.d;
    objective["L"] = cfg.objective.L;
  } else if (cfg.objective.name == "weakly_convex_logistic") {
    objective["d"] = cfg.objective.d;
    objective["n"] = cfg.objective.n;
    objective["rho"] = cfg.objective.rho;
    if (!cfg.objective.data_csv.empty()) {
      objective["data_csv"] = cfg.objective.data_csv;
    }
  } else if (cfg.objective.name == "tiny_mlp") {
    objective["layer_dims"] = cfg.objective.layer_dims;
    objective["activation"] = cfg.objective.activation;
    objective["n"] = cfg.objective.n;
    if (!cfg.objective.data_csv.empty()) {
      objective["data_csv"] = cfg.objective.data_csv;
    }
  }

  json schedule;
  schedule["beta0"] = cfg.schedule.beta0;
  if (cfg.schedule.beta_end) schedule["beta_end"] = *cfg.schedule.beta_end;
  if (cfg.schedule.growth_k) schedule["growth_k"] = *cfg.schedule.growth_k;
  schedule["eta0"] = cfg.schedule.eta0;
  schedule["T0"] = cfg.schedule.T0;
  schedule["lambda"] = number_or_inf(cfg.schedule.lambda);
  schedule["S"] = cfg.schedule.S;
  schedule["return_average"] = cfg.schedule.return_average;

  json privacy;
  privacy["epsilon"] = number_or_inf(cfg.privacy.epsilon);
  privacy["delta"] = cfg.privacy.delta;
  privacy["clip_C"] = cfg.privacy.clip_C;
  privacy["c1"] = cfg.privacy.c1;
  privacy["c2"] = cfg.privacy.c2;
  privacy["sensitivity_multiplier"] = cfg.privacy.sensitivity_multiplier;

  json estimator;
  estimator["P"] = cfg.estimator.P;
  estimator["m"] = cfg.estimator.m;

  json pruning;
  pruning["enabled"] = cfg.pruning.enabled;
  pruning["r"] = cfg.pruning.r;
  pruning["type"] = cfg.pruning.type;
  pruning["A"] = cfg.pruning.A;
  pruning["B"] = cfg.pruning.B;
  pruning["P_prune"] = cfg.pruning.P_prune;
  pruning["beta_prune"] = cfg.pruning.beta_prune;

  json root;
  root["objective"] = objective;
  root["schedule"] = schedule;
  root["privacy"] = privacy;
  root["estimator"] = estimator;
  root["pruning"] = pruning;
  root["reg_mode"] = cfg.reg_mode;
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("config: cannot open " + path);
  out << serialize_config(cfg);
}

}  // namespace dpzo
