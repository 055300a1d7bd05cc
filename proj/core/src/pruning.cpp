#include "dpzo/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpzo/errors.hpp"

namespace dpzo {

void PruningConfig::validate() const {
  if (!(rate_r > 0.0 && rate_r <= 1.0)) {
    throw ConfigError("PruningConfig: rate_r must lie in (0, 1]");
  }
  if (P == 0) throw ConfigError("PruningConfig: P must be positive");
  if (!(beta > 0.0)) throw ConfigError("PruningConfig: beta must be positive");
  if (matrix_type == MatrixType::kRankBased &&
      !(interval_A >= interval_B && interval_B > 0.0)) {
    throw ConfigError("PruningConfig: rank-based interval needs A >= B > 0");
  }
}

double synflow_loss(const ParameterVector& theta, const LayeredShape& shape) {
  shape.validate(theta.dim());
  // Right-to-left: w <- |A_l| w starting from the all-ones vector.
  std::vector<double> w(shape.layers.back().cols, 1.0);
  std::vector<double> next;
  for (auto it = shape.layers.rbegin(); it != shape.layers.rend(); ++it) {
    const LayerBlock& layer = *it;
    next.assign(layer.rows, 0.0);
    for (std::size_t i = 0; i < layer.rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < layer.cols; ++j) {
        acc += std::fabs(theta.values[layer.flat(i, j)]) * w[j];
      }
      next[i] = acc;
    }
    w.swap(next);
  }
  double total = 0.0;
  for (double v : w) total += v;
  return total;
}

SaliencyScore zo_saliency_with_dist(const ParameterVector& theta,
                                    const LayeredShape& shape, uint32_t P,
                                    double beta, uint64_t seed,
                                    const DirectionDistribution& dist) {
  if (P == 0) throw ConfigError("zo_saliency: P must be positive");
  if (!(beta > 0.0)) throw ConfigError("zo_saliency: beta must be positive");
  shape.validate(theta.dim());
  const std::size_t d = theta.dim();

  std::vector<double> grad_est(d, 0.0);
  ParameterVector perturbed(d);
  for (uint32_t p = 0; p < P; ++p) {
    const Direction v = sample_direction(dist, seed, 0, 0, p, Stream::kPrune);
    for (std::size_t i = 0; i < d; ++i) {
      perturbed.values[i] = theta.values[i] + beta * v.values[i];
    }
    const double loss_plus = synflow_loss(perturbed, shape);
    for (std::size_t i = 0; i < d; ++i) {
      perturbed.values[i] = theta.values[i] - beta * v.values[i];
    }
    const double loss_minus = synflow_loss(perturbed, shape);
    const double scalar = (loss_plus - loss_minus) / (2.0 * beta);
    for (std::size_t i = 0; i < d; ++i) {
      grad_est[i] += scalar * v.values[i];
    }
  }

  SaliencyScore score;
  score.beta_used = beta;
  score.P_used = P;
  score.values.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    score.values[i] = grad_est[i] / static_cast<double>(P) * theta.values[i];
  }
  return score;
}

SaliencyScore zo_saliency(const ParameterVector& theta,
                          const LayeredShape& shape, uint32_t P, double beta,
                          uint64_t seed) {
  return zo_saliency_with_dist(theta, shape, P, beta, seed,
                               DirectionDistribution::identity(theta.dim()));
}

std::size_t keep_count(double rate_r, std::size_t d) {
  const double product = rate_r * static_cast<double>(d);
  const double rounded = std::round(product);
  // Snap products that are integers in exact arithmetic (0.1 * 1000) back
  // to that integer before taking the ceiling.
  const double k = (std::fabs(product - rounded) <
                    1e-9 * std::max(1.0, std::fabs(product)))
                       ? rounded
                       : std::ceil(product);
  const auto count = static_cast<std::size_t>(k);
  return std::min(std::max<std::size_t>(count, 1), d);
}

DirectionDistribution build_importance_matrix(const SaliencyScore& score,
                                              const PruningConfig& cfg) {
  cfg.validate();
  const std::size_t d = score.values.size();
  if (d == 0) throw ConfigError("build_importance_matrix: empty score");
  const std::size_t K = keep_count(cfg.rate_r, d);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score.values[a] != score.values[b]) {
      return score.values[a] > score.values[b];
    }
    return a < b;
  });

  DirectionDistribution dist;
  dist.mask.assign(d, false);
  dist.importance_diag.assign(d, 0.0);
  for (std::size_t rank = 0; rank < K; ++rank) {
    const std::size_t idx = order[rank];
    dist.mask[idx] = true;
    dist.importance_diag[idx] =
        cfg.matrix_type == MatrixType::kPruningOnly
            ? 1.0
            : cfg.interval_A - (cfg.interval_A - cfg.interval_B) *
                                   static_cast<double>(rank) /
                                   static_cast<double>(K);
  }
  dist.validate();
  return dist;
}

ParameterVector prune_then_finetune(
    const ParameterVector& theta, const LayeredShape& shape,
    const PruningConfig& cfg, const LossEvaluator& loss, const Dataset& data,
    const StageSchedule& schedule, const EstimatorOptions& est,
    const PrivacySpec& spec, RegMode reg_mode, uint64_t seed,
    MetricsLog* metrics_out, DirectionDistribution* dist_out) {
  const SaliencyScore score =
      zo_saliency(theta, shape, cfg.P, cfg.beta, seed);
  const DirectionDistribution dist = build_importance_matrix(score, cfg);
  if (dist_out != nullptr) *dist_out = dist;
  return run_stagewise(theta, loss, data, schedule, est, spec, dist, reg_mode,
                       seed, metrics_out);
}

}  // namespace dpzo
