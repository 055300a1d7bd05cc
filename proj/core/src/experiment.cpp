#include "dpzo/experiment.hpp"

#include <cmath>

#include "dpzo/errors.hpp"

namespace dpzo {

BenchObjective build_objective(const ObjectiveConfig& cfg, uint64_t seed) {
  BenchObjective obj;
  if (cfg.name == "quadratic") {
    obj = make_quadratic(cfg.d, cfg.condition_number, seed);
  } else if (cfg.name == "lipschitz_norm") {
    obj = make_lipschitz_norm(cfg.d, cfg.L, seed);
  } else if (cfg.name == "weakly_convex_logistic") {
    obj = make_weakly_convex_logistic(cfg.d, cfg.n, cfg.rho, seed);
  } else if (cfg.name == "tiny_mlp") {
    obj = make_tiny_mlp(cfg.layer_dims,
                        cfg.activation == "relu" ? Activation::kRelu
                                                 : Activation::kTanh,
                        seed, cfg.n);
  } else {
    throw ConfigError("unknown objective '" + cfg.name + "'");
  }
  if (!cfg.data_csv.empty()) {
    Dataset imported = read_dataset_csv(cfg.data_csv);
    if (!obj.data.samples.empty() &&
        imported.samples.front().features.size() !=
            obj.data.samples.front().features.size()) {
      throw ConfigError("data_csv feature width does not match objective");
    }
    obj.data = std::move(imported);
    obj.analytic_gradient = nullptr;  // gradient closure captured old data
  }
  return obj;
}

StageSchedule build_schedule(const ScheduleConfig& cfg) {
  StageSchedule schedule;
  schedule.lambda = cfg.lambda;
  schedule.S = cfg.S;
  schedule.T0 = cfg.T0;
  schedule.eta0 = cfg.eta0;
  schedule.return_average = cfg.return_average;
  schedule.zo_scale =
      cfg.beta_end ? ZOScale::from_endpoints(cfg.beta0, *cfg.beta_end, cfg.S)
                   : ZOScale::from_growth(cfg.beta0, *cfg.growth_k);
  schedule.validate();
  return schedule;
}

PrivacySpec build_privacy(const PrivacyConfig& cfg) {
  PrivacySpec spec;
  spec.epsilon = cfg.epsilon;
  spec.delta = cfg.delta;
  spec.clip_C = cfg.clip_C;
  spec.c1 = cfg.c1;
  spec.c2 = cfg.c2;
  spec.sensitivity_multiplier = cfg.sensitivity_multiplier;
  return spec;
}

PruningConfig build_pruning(const PruningSection& cfg) {
  PruningConfig pruning;
  pruning.rate_r = cfg.r;
  pruning.matrix_type = cfg.type == "rank-based" ? MatrixType::kRankBased
                                                 : MatrixType::kPruningOnly;
  pruning.interval_A = cfg.A;
  pruning.interval_B = cfg.B;
  pruning.P = cfg.P_prune;
  pruning.beta = cfg.beta_prune;
  pruning.validate();
  return pruning;
}

RegMode parse_reg_mode(const std::string& name) {
  if (name == "directional") return RegMode::kDirectional;
  if (name == "paper-literal") return RegMode::kPaperLiteral;
  throw ConfigError("unknown reg_mode '" + name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  const BenchObjective objective = build_objective(cfg.objective, cfg.seed);
  const StageSchedule schedule = build_schedule(cfg.schedule);
  const PrivacySpec spec = build_privacy(cfg.privacy);
  const RegMode reg_mode = parse_reg_mode(cfg.reg_mode);
  const std::size_t d = objective.initial_theta.dim();

  EstimatorOptions est;
  est.P = cfg.estimator.P;
  est.m = cfg.estimator.m;
  est.workers = workers;

  DirectionDistribution dist = DirectionDistribution::identity(d);
  if (cfg.pruning.enabled) {
    if (!objective.shape) {
      throw ConfigError("pruning requires an objective with a layer shape");
    }
    const PruningConfig pruning = build_pruning(cfg.pruning);
    const SaliencyScore score = zo_saliency(
        objective.initial_theta, *objective.shape, pruning.P, pruning.beta,
        cfg.seed);
    dist = build_importance_matrix(score, pruning);
  }

  ExperimentResult result;
  result.metrics = MetricsLog{};
  result.theta = run_stagewise(objective.initial_theta, objective.loss,
                               objective.data, schedule, est, spec, dist,
                               reg_mode, cfg.seed, &result.metrics);
  result.dist = std::move(dist);
  result.final_loss = objective.mean_loss(result.theta);
  result.dim = d;
  result.kept = 0;
  for (bool kept : result.dist.mask) result.kept += kept ? 1 : 0;
  const CalibrationResult calibration = calibrate_sigma_theorem1(
      spec.epsilon, spec.delta, schedule.total_steps(), est.P, est.m,
      objective.data.n(), spec.c1, spec.c2);
  result.sigma = calibration.sigma;
  return result;
}

PruneReport run_prune(const ExperimentConfig& cfg) {
  if (!cfg.objective.data_csv.empty()) {
    throw ConfigError(
        "prune: config points at a dataset (objective.data_csv); the pruning "
        "phase must not read data");
  }
  const BenchObjective objective = build_objective(cfg.objective, cfg.seed);
  if (!objective.shape) {
    throw ConfigError("prune: objective exposes no layer shape");
  }
  const PruningConfig pruning = build_pruning(cfg.pruning);

  PruneReport report;
  report.dim = objective.initial_theta.dim();
  report.score = zo_saliency(objective.initial_theta, *objective.shape,
                             pruning.P, pruning.beta, cfg.seed);
  report.dist = build_importance_matrix(report.score, pruning);
  report.synflow_loss_value =
      synflow_loss(objective.initial_theta, *objective.shape);
  for (const LayerBlock& layer : objective.shape->layers) {
    double sum = 0.0;
    for (std::size_t i = 0; i < layer.rows; ++i) {
      for (std::size_t j = 0; j < layer.cols; ++j) {
        sum += report.score.values[layer.flat(i, j)];
      }
    }
    report.layer_saliency_sums.push_back(sum);
  }
  report.kept = 0;
  for (bool kept : report.dist.mask) report.kept += kept ? 1 : 0;
  return report;
}

Checkpoint result_checkpoint(const ExperimentResult& result) {
  Checkpoint ckpt;
  ckpt.theta = result.theta;
  ckpt.mask = result.dist.mask;
  ckpt.importance_diag = result.dist.importance_diag;
  return ckpt;
}

}  // namespace dpzo
