#ifndef DPZO_EXPERIMENT_HPP
#define DPZO_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dpzo/checkpoint.hpp"
#include "dpzo/config.hpp"
#include "dpzo/metrics.hpp"
#include "dpzo/models.hpp"
#include "dpzo/pruning.hpp"
#include "dpzo/stagewise.hpp"

namespace dpzo {

BenchObjective build_objective(const ObjectiveConfig& cfg, uint64_t seed);
StageSchedule build_schedule(const ScheduleConfig& cfg);
PrivacySpec build_privacy(const PrivacyConfig& cfg);
PruningConfig build_pruning(const PruningSection& cfg);
RegMode parse_reg_mode(const std::string& name);

struct ExperimentResult {
  ParameterVector theta;
  DirectionDistribution dist;
  MetricsLog metrics;
  double final_loss = 0.0;
  double sigma = 0.0;
  std::size_t kept = 0;
  std::size_t dim = 0;
};

// Pruning phase (when enabled) followed by the stagewise run. The pruning
// phase sees only the parameter vector and its layer shape, never the
// dataset.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

struct PruneReport {
  SaliencyScore score;
  DirectionDistribution dist;
  double synflow_loss_value = 0.0;
  std::vector<double> layer_saliency_sums;  // analytic conservation check
  std::size_t kept = 0;
  std::size_t dim = 0;
};

// Saliency + importance matrix only. Rejects configs that point at a
// dataset file: this phase must not be able to read data.
PruneReport run_prune(const ExperimentConfig& cfg);

Checkpoint result_checkpoint(const ExperimentResult& result);

}  // namespace dpzo

#endif  // DPZO_EXPERIMENT_HPP
