#ifndef DPZO_STAGEWISE_HPP
#define DPZO_STAGEWISE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dpzo/direction.hpp"
#include "dpzo/dp_mechanism.hpp"
#include "dpzo/metrics.hpp"
#include "dpzo/models.hpp"
#include "dpzo/param_vector.hpp"
#include "dpzo/zo_estimator.hpp"

namespace dpzo {

// How the proximal term enters the per-direction scalar. The directional
// form adds (1/lambda) <theta - anchor, v_p> before the v_p multiply, which
// recovers the regularizer's gradient in expectation; the literal form adds
// (1/lambda) ||theta - anchor|| as printed in the source pseudo-code.
enum class RegMode { kDirectional, kPaperLiteral };

// Outer-loop schedule. Per stage s >= 1:
//   beta_s = k * beta_{s-1},  T_s = 2 * T_{s-1},  eta_s = eta_{s-1} / 2,
// applied at the top of each stage, so eta_s * T_s is constant across all
// stages (equal to eta0 * T0).
struct StageSchedule {
  double lambda = 0.0;  // proximal weight; +infinity disables the regularizer
  uint32_t S = 1;
  uint64_t T0 = 1;
  double eta0 = 0.0;
  ZOScale zo_scale;
  // Return the averaged iterate (1/T_s) sum theta_t from each stage instead
  // of the last iterate.
  bool return_average = false;

  struct StageParams {
    uint32_t s = 0;
    double beta = 0.0;
    double eta = 0.0;
    uint64_t T = 0;
  };

  void validate() const;
  StageParams stage(uint32_t s) const;  // s in [1, S]
  std::vector<StageParams> all_stages() const;
  uint64_t total_steps() const;
};

// Constants from the convergence analysis; schedule-derivation inputs only,
// never consumed by the optimization loop.
struct TheoryParams {
  double mu = 0.0;
  double gamma = 0.0;
  double lipschitz_L = 0.0;
  double rho = 0.0;
  double alpha0 = 0.0;
  double alpha_target = 0.0;
};

struct OptimizerState {
  ParameterVector theta;
  ParameterVector stage_anchor;
  uint32_t stage = 0;
  uint32_t iteration = 0;
  uint64_t seed = 0;
  BudgetLedger ledger;
  MetricsLog metrics;
};

struct EstimatorOptions {
  uint32_t P = 1;
  uint32_t m = 1;
  int workers = 1;
};

// Distinct m indices drawn uniformly without replacement from [0, n),
// keyed by (seed, stage, iteration). Exposed so reference loops can
// reproduce the optimizer's batches exactly.
std::vector<std::size_t> sample_batch_indices(uint64_t seed, uint32_t stage,
                                              uint32_t iteration, std::size_t m,
                                              std::size_t n);

// One private step on a given minibatch: per direction p, compute the m
// two-point differences, clip each to C, add the proximal term, sum, noise
// once, divide by m, multiply by v_p; average over directions and descend.
// Masked coordinates are never touched. Appends one metrics row.
void dp_zoo_step(OptimizerState& state, const LossEvaluator& loss,
                 const std::vector<DataSample>& batch, uint32_t P, double beta,
                 double eta, double lambda, const PrivacySpec& spec,
                 const DirectionDistribution& dist, RegMode reg_mode,
                 int workers = 1);

// Same step with caller-provided directions (the public overload samples
// them). Test seam and the building block for reference trajectories.
void dp_zoo_step_with_directions(OptimizerState& state,
                                 const LossEvaluator& loss,
                                 const std::vector<DataSample>& batch,
                                 std::span<const Direction> directions,
                                 double beta, double eta, double lambda,
                                 const PrivacySpec& spec,
                                 const DirectionDistribution& dist,
                                 RegMode reg_mode, int workers = 1);

// T steps at fixed (beta, eta) with fresh minibatches per step; updates the
// stage anchor to the returned iterate (last or averaged).
void run_stage(OptimizerState& state, const LossEvaluator& loss,
               const Dataset& data, double beta, double eta, uint64_t T,
               double lambda, const EstimatorOptions& est,
               const PrivacySpec& spec, const DirectionDistribution& dist,
               RegMode reg_mode, bool return_average = false);

// Full stagewise loop: calibrates sigma over the total step count, then
// runs S stages with the geometric schedules and proximal anchor resets.
ParameterVector run_stagewise(const ParameterVector& initial,
                              const LossEvaluator& loss, const Dataset& data,
                              const StageSchedule& schedule,
                              const EstimatorOptions& est,
                              const PrivacySpec& spec,
                              const DirectionDistribution& dist,
                              RegMode reg_mode, uint64_t seed,
                              MetricsLog* metrics_out = nullptr);

// Stage step size from the convergence analysis:
// alpha_prev * min{ Pm/6gamma^2, Pme/48dC^2,
//                   eps^2 n^2 / (6 d c2^2 C^2 P T log(P/delta)),
//                   Pm / (384 d beta_s^2 L^4) }.
double theorem2_eta(const TheoryParams& tp, double alpha_prev, uint32_t P,
                    uint32_t m, std::size_t d, double C, uint64_t T,
                    uint64_t n, double eps, double delta, double c2,
                    double beta_s);

}  // namespace dpzo

#endif  // DPZO_STAGEWISE_HPP
