#include <benchmark/benchmark.h>

#include "dpzo/direction.hpp"
#include "dpzo/models.hpp"
#include "dpzo/pruning.hpp"
#include "dpzo/stagewise.hpp"
#include "dpzo/zo_estimator.hpp"

namespace {

using namespace dpzo;

const DataSample kDummy{{0.0}, 0.0};

void BM_SampleDirection(benchmark::State& state) {
  const auto dist = DirectionDistribution::identity(
      static_cast<std::size_t>(state.range(0)));
  uint32_t iter = 0;
  for (auto _ : state) {
    const Direction d = sample_direction(dist, 42, 1, iter++, 0);
    benchmark::DoNotOptimize(d.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleDirection)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_FiniteDiff(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const BenchObjective obj = make_quadratic(d, 10.0, 7);
  const auto dist = DirectionDistribution::identity(d);
  const Direction v = sample_direction(dist, 1, 1, 1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        finite_diff(obj.loss, obj.initial_theta, v, 1e-3, kDummy));
  }
}
BENCHMARK(BM_FiniteDiff)->Arg(1000)->Arg(10000);

void BM_DpZooStep(benchmark::State& state) {
  const BenchObjective obj = make_weakly_convex_logistic(100, 512, 0.1, 3);
  const auto dist = DirectionDistribution::identity(100);
  PrivacySpec spec;
  spec.epsilon = 4.0;
  spec.delta = 1.0 / 512;
  spec.clip_C = 2.0;
  EstimatorOptions est;
  OptimizerState base;
  base.theta = obj.initial_theta;
  base.stage_anchor = obj.initial_theta;
  base.stage = 1;
  base.seed = 11;
  base.ledger.sigma = 1.0;
  std::vector<DataSample> batch(obj.data.samples.begin(),
                                obj.data.samples.begin() + 16);
  for (auto _ : state) {
    OptimizerState s = base;
    s.iteration = 1;
    dp_zoo_step(s, obj.loss, batch, static_cast<uint32_t>(state.range(0)),
                1e-4, 1e-4, 2000.0, spec, dist, RegMode::kDirectional);
    benchmark::DoNotOptimize(s.theta.values.data());
  }
}
BENCHMARK(BM_DpZooStep)->Arg(1)->Arg(4)->Arg(16);

void BM_SynflowSaliency(benchmark::State& state) {
  const BenchObjective obj = make_tiny_mlp({32, 64, 32, 8}, Activation::kTanh,
                                           5, 8);
  for (auto _ : state) {
    const SaliencyScore score = zo_saliency(
        obj.initial_theta, *obj.shape, static_cast<uint32_t>(state.range(0)),
        1e-4, 9);
    benchmark::DoNotOptimize(score.values.data());
  }
}
BENCHMARK(BM_SynflowSaliency)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
