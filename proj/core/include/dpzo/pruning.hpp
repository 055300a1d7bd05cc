#ifndef DPZO_PRUNING_HPP
#define DPZO_PRUNING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dpzo/direction.hpp"
#include "dpzo/layered_shape.hpp"
#include "dpzo/param_vector.hpp"
#include "dpzo/stagewise.hpp"

namespace dpzo {

// Per-parameter saliency scores. Estimated from the all-ones chain loss,
// which never sees a data sample; this module deliberately has no Dataset
// argument anywhere before the fine-tuning phase.
struct SaliencyScore {
  std::vector<double> values;
  double beta_used = 0.0;
  uint32_t P_used = 0;
};

enum class MatrixType { kPruningOnly, kRankBased };

struct PruningConfig {
  double rate_r = 1.0;  // fraction of parameters kept trainable
  MatrixType matrix_type = MatrixType::kPruningOnly;
  double interval_A = 1.0;
  double interval_B = 1.0;
  uint32_t P = 1;
  double beta = 1e-4;

  void validate() const;
};

// 1^T (prod_l |W_l|) 1: the all-ones bilinear form over elementwise-absolute
// layer matrices, evaluated right-to-left as matrix-vector products.
double synflow_loss(const ParameterVector& theta, const LayeredShape& shape);

// Two-point saliency: Score = (1/P) sum_p grad_est_p (.) theta with
// standard-normal probe directions on a dedicated stream.
SaliencyScore zo_saliency(const ParameterVector& theta,
                          const LayeredShape& shape, uint32_t P, double beta,
                          uint64_t seed);

// Same estimator with a caller-supplied probe distribution (test seam).
SaliencyScore zo_saliency_with_dist(const ParameterVector& theta,
                                    const LayeredShape& shape, uint32_t P,
                                    double beta, uint64_t seed,
                                    const DirectionDistribution& dist);

// Number of parameters kept trainable: ceil(r * d) in exact arithmetic
// (products that are integers up to FP slop snap to that integer).
std::size_t keep_count(double rate_r, std::size_t d);

// Keep set = top ceil(r*d) scores, descending, ties broken by ascending flat
// index. pruning-only sets unit scale on the keep set; rank-based assigns
// A - (A-B)*rank/K over ranks 0..K-1.
DirectionDistribution build_importance_matrix(const SaliencyScore& score,
                                              const PruningConfig& cfg);

// Phase 1: saliency + importance matrix, no dataset in sight.
// Phase 2: stagewise fine-tuning under the resulting distribution. The
// privacy parameters of phase 2 are untouched by phase 1.
ParameterVector prune_then_finetune(
    const ParameterVector& theta, const LayeredShape& shape,
    const PruningConfig& cfg, const LossEvaluator& loss, const Dataset& data,
    const StageSchedule& schedule, const EstimatorOptions& est,
    const PrivacySpec& spec, RegMode reg_mode, uint64_t seed,
    MetricsLog* metrics_out = nullptr,
    DirectionDistribution* dist_out = nullptr);

}  // namespace dpzo

#endif  // DPZO_PRUNING_HPP
