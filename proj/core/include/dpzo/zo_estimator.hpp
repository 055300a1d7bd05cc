#ifndef DPZO_ZO_ESTIMATOR_HPP
#define DPZO_ZO_ESTIMATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dpzo/direction.hpp"
#include "dpzo/param_vector.hpp"

namespace dpzo {

struct DataSample {
  std::vector<double> features;
  double label = 0.0;
};

// A pure loss: deterministic in (theta, sample), safe to call from many
// threads at once.
struct LossEvaluator {
  std::function<double(const ParameterVector&, const DataSample&)> evaluate;
  std::optional<double> lipschitz_hint;
};

// Perturbation-radius schedule: beta grows geometrically across stages.
// When beta_end is supplied, growth_k is derived so the stage-S value lands
// on beta_end.
struct ZOScale {
  double beta0 = 0.0;
  double growth_k = 1.0;
  std::optional<double> beta_end;

  static ZOScale from_growth(double beta0, double growth_k);
  static ZOScale from_endpoints(double beta0, double beta_end, uint32_t stages);
};

// beta0 * k^s, computed as s successive multiplications so that consecutive
// stage values satisfy beta_s == k * beta_{s-1} bit-exactly.
double beta_at_stage(const ZOScale& scale, uint32_t s);

// Two-point difference (f(theta + beta v) - f(theta - beta v)) / (2 beta) on
// one sample. Exactly two loss evaluations.
double finite_diff(const LossEvaluator& loss, const ParameterVector& theta,
                   const Direction& v, double beta, const DataSample& sample);

struct SamplingKey {
  uint64_t seed = 0;
  uint32_t stage = 0;
  uint32_t iteration = 0;
};

// Non-private estimator: (1/P) sum_p [ (1/m) sum_i finite_diff ] * v_p.
// No clipping, no noise. Aggregation runs in ascending (p, i) order.
ParameterVector zo_gradient(const LossEvaluator& loss,
                            const ParameterVector& theta,
                            const std::vector<DataSample>& batch, uint32_t P,
                            double beta, const DirectionDistribution& dist,
                            const SamplingKey& key);

}  // namespace dpzo

#endif  // DPZO_ZO_ESTIMATOR_HPP
