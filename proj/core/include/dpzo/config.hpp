#ifndef DPZO_CONFIG_HPP
#define DPZO_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpzo {

// Experiment description as stored on disk (flat JSON, exact field names,
// unknown fields rejected). Parsing and serialization round-trip bit-exactly.

struct ObjectiveConfig {
  std::string name;  // quadratic | lipschitz_norm | weakly_convex_logistic | tiny_mlp
  std::size_t d = 0;
  double condition_number = 1.0;        // quadratic
  double L = 1.0;                       // lipschitz_norm
  std::size_t n = 0;                    // logistic / tiny_mlp sample count
  double rho = 0.0;                     // weakly_convex_logistic
  std::vector<std::size_t> layer_dims;  // tiny_mlp
  std::string activation = "tanh";      // tiny_mlp
  std::string data_csv;                 // optional dataset import path
};

struct ScheduleConfig {
  double beta0 = 0.0;
  std::optional<double> beta_end;  // exactly one of beta_end / growth_k
  std::optional<double> growth_k;
  double eta0 = 0.0;
  uint64_t T0 = 0;
  double lambda = 0.0;  // may be +infinity ("inf" in the file)
  uint32_t S = 0;
  bool return_average = false;
};

struct PrivacyConfig {
  double epsilon = 0.0;  // may be +infinity ("inf" in the file)
  double delta = 0.0;
  double clip_C = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double sensitivity_multiplier = 1.0;
};

struct EstimatorConfig {
  uint32_t P = 0;
  uint32_t m = 0;
};

struct PruningSection {
  bool enabled = false;
  double r = 1.0;
  std::string type = "pruning-only";  // pruning-only | rank-based
  double A = 1.0;
  double B = 1.0;
  uint32_t P_prune = 1;
  double beta_prune = 1e-4;
};

struct ExperimentConfig {
  ObjectiveConfig objective;
  ScheduleConfig schedule;
  PrivacyConfig privacy;
  EstimatorConfig estimator;
  PruningSection pruning;
  std::string reg_mode = "directional";  // directional | paper-literal
  uint64_t seed = 0;
};

// Throws ConfigError on malformed JSON, unknown fields, missing required
// fields, or out-of-range values.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

std::string serialize_config(const ExperimentConfig& cfg);
void save_config(const ExperimentConfig& cfg, const std::string& path);

}  // namespace dpzo

#endif  // DPZO_CONFIG_HPP
