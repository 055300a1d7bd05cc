#include "dpzo/zo_estimator.hpp"

#include <cmath>
#include <string>

#include "dpzo/errors.hpp"

namespace dpzo {

ZOScale ZOScale::from_growth(double beta0, double growth_k) {
  if (!(beta0 > 0.0)) throw ConfigError("ZOScale: beta0 must be positive");
  if (!(growth_k >= 1.0)) throw ConfigError("ZOScale: growth_k must be >= 1");
  ZOScale scale;
  scale.beta0 = beta0;
  scale.growth_k = growth_k;
  return scale;
}

ZOScale ZOScale::from_endpoints(double beta0, double beta_end,
                                uint32_t stages) {
  if (!(beta0 > 0.0)) throw ConfigError("ZOScale: beta0 must be positive");
  if (!(beta_end >= beta0)) {
    throw ConfigError("ZOScale: beta_end must be >= beta0");
  }
  if (stages == 0) throw ConfigError("ZOScale: stage count must be positive");
  ZOScale scale;
  scale.beta0 = beta0;
  scale.growth_k = std::pow(beta_end / beta0, 1.0 / static_cast<double>(stages));
  scale.beta_end = beta_end;
  return scale;
}

double beta_at_stage(const ZOScale& scale, uint32_t s) {
  double beta = scale.beta0;
  for (uint32_t i = 0; i < s; ++i) beta *= scale.growth_k;
  return beta;
}

namespace {

ParameterVector perturb(const ParameterVector& theta, double beta,
                        const Direction& v, double sign) {
  ParameterVector out(theta.dim());
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    out.values[i] = theta.values[i] + sign * (beta * v.values[i]);
  }
  return out;
}

}  // namespace

double finite_diff(const LossEvaluator& loss, const ParameterVector& theta,
                   const Direction& v, double beta, const DataSample& sample) {
  if (!(beta > 0.0)) throw ConfigError("finite_diff: beta must be positive");
  if (v.dim() != theta.dim()) {
    throw ConfigError("finite_diff: direction/theta dimension mismatch");
  }
  const double f_plus = loss.evaluate(perturb(theta, beta, v, +1.0), sample);
  if (!std::isfinite(f_plus)) {
    throw NumericError(
        "finite_diff: non-finite loss at theta + beta*v (direction index " +
        std::to_string(v.index) + ", beta " + std::to_string(beta) + ")");
  }
  const double f_minus = loss.evaluate(perturb(theta, beta, v, -1.0), sample);
  if (!std::isfinite(f_minus)) {
    throw NumericError(
        "finite_diff: non-finite loss at theta - beta*v (direction index " +
        std::to_string(v.index) + ", beta " + std::to_string(beta) + ")");
  }
  return (f_plus - f_minus) / (2.0 * beta);
}

ParameterVector zo_gradient(const LossEvaluator& loss,
                            const ParameterVector& theta,
                            const std::vector<DataSample>& batch, uint32_t P,
                            double beta, const DirectionDistribution& dist,
                            const SamplingKey& key) {
  if (batch.empty()) throw ConfigError("zo_gradient: empty batch");
  if (P == 0) throw ConfigError("zo_gradient: P must be positive");
  ParameterVector grad(theta.dim());
  for (uint32_t p = 0; p < P; ++p) {
    const Direction v =
        sample_direction(dist, key.seed, key.stage, key.iteration, p);
    double sum = 0.0;
    for (const DataSample& sample : batch) {
      sum += finite_diff(loss, theta, v, beta, sample);
    }
    const double scalar = sum / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < grad.dim(); ++i) {
      grad.values[i] += scalar * v.values[i];
    }
  }
  for (std::size_t i = 0; i < grad.dim(); ++i) {
    grad.values[i] /= static_cast<double>(P);
  }
  return grad;
}

}  // namespace dpzo
