#include "dpzo/stagewise.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "dpzo/errors.hpp"

namespace dpzo {

void StageSchedule::validate() const {
  if (S == 0) throw ConfigError("StageSchedule: S must be >= 1");
  if (T0 == 0) throw ConfigError("StageSchedule: T0 must be >= 1");
  if (!(eta0 > 0.0)) throw ConfigError("StageSchedule: eta0 must be positive");
  if (!(lambda > 0.0)) {
    throw ConfigError("StageSchedule: lambda must be positive (or inf)");
  }
  if (!(zo_scale.beta0 > 0.0) || !(zo_scale.growth_k >= 1.0)) {
    throw ConfigError("StageSchedule: invalid ZO scale");
  }
}

StageSchedule::StageParams StageSchedule::stage(uint32_t s) const {
  if (s == 0 || s > S) {
    throw ConfigError("StageSchedule: stage index " + std::to_string(s) +
                      " outside [1, " + std::to_string(S) + "]");
  }
  StageParams params;
  params.s = s;
  params.beta = beta_at_stage(zo_scale, s);
  params.eta = eta0;
  params.T = T0;
  for (uint32_t i = 0; i < s; ++i) {
    params.eta /= 2.0;
    params.T *= 2;
  }
  return params;
}

std::vector<StageSchedule::StageParams> StageSchedule::all_stages() const {
  std::vector<StageParams> stages;
  stages.reserve(S);
  for (uint32_t s = 1; s <= S; ++s) stages.push_back(stage(s));
  return stages;
}

uint64_t StageSchedule::total_steps() const {
  uint64_t total = 0;
  for (const StageParams& params : all_stages()) total += params.T;
  return total;
}

std::vector<std::size_t> sample_batch_indices(uint64_t seed, uint32_t stage,
                                              uint32_t iteration, std::size_t m,
                                              std::size_t n) {
  if (m == 0 || m > n) {
    throw ConfigError("sample_batch_indices: need 0 < m <= n");
  }
  // Partial Fisher-Yates over the full index pool; each swap position gets
  // its own counter word, so the sequence depends only on the key.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t j = 0; j < m; ++j) {
    const uint64_t r = bounded_u64(seed, Stream::kBatch, stage, iteration, j, 0,
                                   static_cast<uint64_t>(n - j));
    std::swap(pool[j], pool[j + static_cast<std::size_t>(r)]);
  }
  pool.resize(m);
  return pool;
}

namespace {

// diffs[p*m + i] = finite_diff(theta, v_p, beta, batch[i]); directions are
// partitioned over workers, aggregation stays with the caller in ascending
// (p, i) order, so worker count cannot affect results.
void compute_diffs(const LossEvaluator& loss, const ParameterVector& theta,
                   const std::vector<DataSample>& batch,
                   std::span<const Direction> directions, double beta,
                   int workers, std::vector<double>& diffs) {
  const std::size_t P = directions.size();
  const std::size_t m = batch.size();
  diffs.assign(P * m, 0.0);
  auto run_strided = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t p = begin; p < P; p += stride) {
      for (std::size_t i = 0; i < m; ++i) {
        diffs[p * m + i] =
            finite_diff(loss, theta, directions[p], beta, batch[i]);
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), P);
  if (n_workers <= 1) {
    run_strided(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        run_strided(w, n_workers);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double dot_with_direction(const ParameterVector& a, const Direction& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += a.values[i] * v.values[i];
  }
  return sum;
}

}  // namespace

void dp_zoo_step_with_directions(OptimizerState& state,
                                 const LossEvaluator& loss,
                                 const std::vector<DataSample>& batch,
                                 std::span<const Direction> directions,
                                 double beta, double eta, double lambda,
                                 const PrivacySpec& spec,
                                 const DirectionDistribution& dist,
                                 RegMode reg_mode, int workers) {
  if (batch.empty()) throw ConfigError("dp_zoo_step: empty batch");
  if (directions.empty()) throw ConfigError("dp_zoo_step: no directions");
  if (!(eta > 0.0)) throw ConfigError("dp_zoo_step: eta must be positive");
  const std::size_t d = state.theta.dim();
  const std::size_t P = directions.size();
  const std::size_t m = batch.size();

  // Pre-update batch loss for the metrics row.
  double batch_loss = 0.0;
  for (const DataSample& sample : batch) {
    batch_loss += loss.evaluate(state.theta, sample);
  }
  batch_loss /= static_cast<double>(m);

  std::vector<double> diffs;
  try {
    compute_diffs(loss, state.theta, batch, directions, beta, workers, diffs);
  } catch (const NumericError& e) {
    throw NumericError("dp_zoo_step: evaluation failed (stage " +
                       std::to_string(state.stage) + ", iteration " +
                       std::to_string(state.iteration) + "): " + e.what());
  }

  const bool proximal = !std::isinf(lambda);
  ParameterVector anchor_delta;
  double anchor_norm = 0.0;
  if (proximal) {
    anchor_delta = ParameterVector(d);
    for (std::size_t i = 0; i < d; ++i) {
      anchor_delta.values[i] =
          state.theta.values[i] - state.stage_anchor.values[i];
    }
    if (reg_mode == RegMode::kPaperLiteral) {
      anchor_norm = l2_norm(anchor_delta);
    }
  }

  const double sigma_eff = state.ledger.sigma * spec.sensitivity_multiplier;
  ParameterVector grad(d);
  std::size_t clipped = 0;
  for (std::size_t p = 0; p < P; ++p) {
    double reg_term = 0.0;
    if (proximal) {
      reg_term = (reg_mode == RegMode::kPaperLiteral
                      ? anchor_norm
                      : dot_with_direction(anchor_delta, directions[p])) /
                 lambda;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double raw = diffs[p * m + i];
      if (std::fabs(raw) > spec.clip_C) ++clipped;
      sum += clip_scalar(raw, spec.clip_C) + reg_term;
    }
    const double noised =
        add_noise(sum, sigma_eff, spec.clip_C, state.seed, state.stage,
                  state.iteration, static_cast<uint32_t>(p));
    const double scalar = noised / static_cast<double>(m);
    if (!std::isfinite(scalar)) {
      throw NumericError("dp_zoo_step: non-finite direction scalar (stage " +
                         std::to_string(state.stage) + ", iteration " +
                         std::to_string(state.iteration) + ", direction " +
                         std::to_string(p) + ")");
    }
    for (std::size_t i = 0; i < d; ++i) {
      grad.values[i] += scalar * directions[p].values[i];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    grad.values[i] /= static_cast<double>(P);
  }

  for (std::size_t i = 0; i < d; ++i) {
    if (!dist.mask[i]) continue;  // pruning freeze
    state.theta.values[i] -= eta * grad.values[i];
    if (!std::isfinite(state.theta.values[i])) {
      throw NumericError("dp_zoo_step: non-finite update (stage " +
                         std::to_string(state.stage) + ", iteration " +
                         std::to_string(state.iteration) + ", coordinate " +
                         std::to_string(i) + ")");
    }
  }

  state.ledger.steps_taken += 1;
  state.ledger.spent_epsilon_estimate =
      epsilon_spent_estimate(state.ledger, spec.delta, spec.c2);

  MetricsRow row;
  row.stage = state.stage;
  row.iteration = state.iteration;
  row.loss = batch_loss;
  row.beta = beta;
  row.eta = eta;
  row.sigma = state.ledger.sigma;
  row.clip_fraction = static_cast<double>(clipped) / static_cast<double>(P * m);
  row.grad_norm_estimate = l2_norm(grad);
  row.epsilon_spent_estimate = state.ledger.spent_epsilon_estimate;
  state.metrics.rows.push_back(row);
}

void dp_zoo_step(OptimizerState& state, const LossEvaluator& loss,
                 const std::vector<DataSample>& batch, uint32_t P, double beta,
                 double eta, double lambda, const PrivacySpec& spec,
                 const DirectionDistribution& dist, RegMode reg_mode,
                 int workers) {
  if (P == 0) throw ConfigError("dp_zoo_step: P must be positive");
  std::vector<Direction> directions;
  directions.reserve(P);
  for (uint32_t p = 0; p < P; ++p) {
    directions.push_back(
        sample_direction(dist, state.seed, state.stage, state.iteration, p));
  }
  dp_zoo_step_with_directions(state, loss, batch, directions, beta, eta,
                              lambda, spec, dist, reg_mode, workers);
}

void run_stage(OptimizerState& state, const LossEvaluator& loss,
               const Dataset& data, double beta, double eta, uint64_t T,
               double lambda, const EstimatorOptions& est,
               const PrivacySpec& spec, const DirectionDistribution& dist,
               RegMode reg_mode, bool return_average) {
  if (T == 0) throw ConfigError("run_stage: T must be >= 1");
  const std::size_t n = data.n();

  ParameterVector average;
  if (return_average) average = ParameterVector(state.theta.dim());

  for (uint64_t t = 1; t <= T; ++t) {
    state.iteration = static_cast<uint32_t>(t);
    const auto indices =
        sample_batch_indices(state.seed, state.stage, state.iteration, est.m, n);
    std::vector<DataSample> batch;
    batch.reserve(indices.size());
    for (std::size_t idx : indices) batch.push_back(data.samples[idx]);
    dp_zoo_step(state, loss, batch, est.P, beta, eta, lambda, spec, dist,
                reg_mode, est.workers);
    if (return_average) {
      for (std::size_t i = 0; i < average.dim(); ++i) {
        average.values[i] += state.theta.values[i];
      }
    }
  }
  if (return_average) {
    for (std::size_t i = 0; i < average.dim(); ++i) {
      average.values[i] /= static_cast<double>(T);
    }
    state.theta = average;
  }
  state.stage_anchor = state.theta;
}

ParameterVector run_stagewise(const ParameterVector& initial,
                              const LossEvaluator& loss, const Dataset& data,
                              const StageSchedule& schedule,
                              const EstimatorOptions& est,
                              const PrivacySpec& spec,
                              const DirectionDistribution& dist,
                              RegMode reg_mode, uint64_t seed,
                              MetricsLog* metrics_out) {
  schedule.validate();
  dist.validate();
  if (dist.dim() != initial.dim()) {
    throw ConfigError("run_stagewise: distribution/theta dimension mismatch");
  }
  if (est.m == 0 || est.m > data.n()) {
    throw ConfigError("run_stagewise: batch size must satisfy 0 < m <= n");
  }

  OptimizerState state;
  state.theta = initial;
  state.stage_anchor = initial;
  state.seed = seed;
  state.ledger.P = est.P;
  state.ledger.q =
      static_cast<double>(est.m) / static_cast<double>(data.n());
  const CalibrationResult calibration = calibrate_sigma_theorem1(
      spec.epsilon, spec.delta, schedule.total_steps(), est.P, est.m,
      data.n(), spec.c1, spec.c2);
  state.ledger.sigma = calibration.sigma;

  for (const StageSchedule::StageParams& params : schedule.all_stages()) {
    state.stage = params.s;
    run_stage(state, loss, data, params.beta, params.eta, params.T,
              schedule.lambda, est, spec, dist, reg_mode,
              schedule.return_average);
  }
  if (metrics_out != nullptr) *metrics_out = std::move(state.metrics);
  return state.theta;
}

double theorem2_eta(const TheoryParams& tp, double alpha_prev, uint32_t P,
                    uint32_t m, std::size_t d, double C, uint64_t T,
                    uint64_t n, double eps, double delta, double c2,
                    double beta_s) {
  if (!(tp.gamma > 0.0) || !(tp.lipschitz_L > 0.0) || !(alpha_prev > 0.0) ||
      !(C > 0.0) || !(eps > 0.0) || !(delta > 0.0) || !(beta_s > 0.0) ||
      P == 0 || m == 0 || d == 0 || T == 0 || n == 0) {
    throw ConfigError("theorem2_eta: all parameters must be positive");
  }
  const double Pm = static_cast<double>(P) * static_cast<double>(m);
  const double dd = static_cast<double>(d);
  const double t1 = Pm / (6.0 * tp.gamma * tp.gamma);
  const double t2 = Pm * std::exp(1.0) / (48.0 * dd * C * C);
  const double t3 =
      eps * eps * static_cast<double>(n) * static_cast<double>(n) /
      (6.0 * dd * c2 * c2 * C * C * static_cast<double>(P) *
       static_cast<double>(T) * std::log(static_cast<double>(P) / delta));
  const double L4 = std::pow(tp.lipschitz_L, 4);
  const double t4 = Pm / (384.0 * dd * beta_s * beta_s * L4);
  return alpha_prev * std::min(std::min(t1, t2), std::min(t3, t4));
}

}  // namespace dpzo
