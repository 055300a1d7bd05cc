#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dpzo/checkpoint.hpp"
#include "dpzo/config.hpp"
#include "dpzo/errors.hpp"
#include "dpzo/metrics.hpp"
#include "support/test_util.hpp"

using namespace dpzo;
using dpzo::testing::TempDir;
using dpzo::testing::read_file_bytes;

namespace {

ExperimentConfig sample_config() {
  ExperimentConfig cfg;
  cfg.objective.name = "weakly_convex_logistic";
  cfg.objective.d = 20;
  cfg.objective.n = 512;
  cfg.objective.rho = 0.1;
  cfg.schedule.beta0 = 1e-6;
  cfg.schedule.beta_end = 1e-5;
  cfg.schedule.eta0 = 1e-4;
  cfg.schedule.T0 = 1000;
  cfg.schedule.lambda = 5e-4;
  cfg.schedule.S = 3;
  cfg.privacy.epsilon = 4.0;
  cfg.privacy.delta = 1.0 / 512;
  cfg.privacy.clip_C = 2.0;
  cfg.estimator.P = 1;
  cfg.estimator.m = 16;
  cfg.pruning.enabled = true;
  cfg.pruning.r = 0.1;
  cfg.pruning.type = "rank-based";
  cfg.pruning.A = 1.2;
  cfg.pruning.B = 0.8;
  cfg.pruning.P_prune = 500;
  cfg.pruning.beta_prune = 1e-4;
  cfg.seed = 42;
  return cfg;
}

void check_roundtrip(const ExperimentConfig& cfg) {
  const ExperimentConfig back = parse_config(serialize_config(cfg));
  CHECK(back.objective.name == cfg.objective.name);
  CHECK(back.objective.d == cfg.objective.d);
  CHECK(back.objective.n == cfg.objective.n);
  CHECK(back.objective.rho == cfg.objective.rho);
  CHECK(back.objective.condition_number == cfg.objective.condition_number);
  CHECK(back.objective.L == cfg.objective.L);
  CHECK(back.objective.layer_dims == cfg.objective.layer_dims);
  CHECK(back.objective.activation == cfg.objective.activation);
  CHECK(back.objective.data_csv == cfg.objective.data_csv);
  CHECK(back.schedule.beta0 == cfg.schedule.beta0);
  CHECK(back.schedule.beta_end == cfg.schedule.beta_end);
  CHECK(back.schedule.growth_k == cfg.schedule.growth_k);
  CHECK(back.schedule.eta0 == cfg.schedule.eta0);
  CHECK(back.schedule.T0 == cfg.schedule.T0);
  CHECK((back.schedule.lambda == cfg.schedule.lambda ||
         (std::isinf(back.schedule.lambda) && std::isinf(cfg.schedule.lambda))));
  CHECK(back.schedule.S == cfg.schedule.S);
  CHECK(back.schedule.return_average == cfg.schedule.return_average);
  CHECK((back.privacy.epsilon == cfg.privacy.epsilon ||
         (std::isinf(back.privacy.epsilon) && std::isinf(cfg.privacy.epsilon))));
  CHECK(back.privacy.delta == cfg.privacy.delta);
  CHECK(back.privacy.clip_C == cfg.privacy.clip_C);
  CHECK(back.privacy.c1 == cfg.privacy.c1);
  CHECK(back.privacy.c2 == cfg.privacy.c2);
  CHECK(back.privacy.sensitivity_multiplier ==
        cfg.privacy.sensitivity_multiplier);
  CHECK(back.estimator.P == cfg.estimator.P);
  CHECK(back.estimator.m == cfg.estimator.m);
  CHECK(back.pruning.enabled == cfg.pruning.enabled);
  CHECK(back.pruning.r == cfg.pruning.r);
  CHECK(back.pruning.type == cfg.pruning.type);
  CHECK(back.pruning.A == cfg.pruning.A);
  CHECK(back.pruning.B == cfg.pruning.B);
  CHECK(back.pruning.P_prune == cfg.pruning.P_prune);
  CHECK(back.pruning.beta_prune == cfg.pruning.beta_prune);
  CHECK(back.reg_mode == cfg.reg_mode);
  CHECK(back.seed == cfg.seed);
}

}  // namespace

TEST_CASE("config: bit-exact round trip") {
  check_roundtrip(sample_config());

  ExperimentConfig inf_cfg = sample_config();
  inf_cfg.privacy.epsilon = std::numeric_limits<double>::infinity();
  inf_cfg.schedule.lambda = std::numeric_limits<double>::infinity();
  inf_cfg.schedule.beta_end.reset();
  inf_cfg.schedule.growth_k = 2.1544346900318837;
  inf_cfg.pruning.enabled = false;
  inf_cfg.reg_mode = "paper-literal";
  check_roundtrip(inf_cfg);

  ExperimentConfig mlp_cfg = sample_config();
  mlp_cfg.objective = ObjectiveConfig{};
  mlp_cfg.objective.name = "tiny_mlp";
  mlp_cfg.objective.layer_dims = {6, 12, 4};
  mlp_cfg.objective.activation = "tanh";
  mlp_cfg.objective.n = 32;
  check_roundtrip(mlp_cfg);

  // Serialization itself is deterministic.
  CHECK(serialize_config(sample_config()) == serialize_config(sample_config()));
}

TEST_CASE("config: unknown and malformed fields are rejected") {
  const std::string base = serialize_config(sample_config());
  CHECK_NOTHROW(parse_config(base));

  std::string with_unknown = base;
  with_unknown.insert(with_unknown.find("\"seed\""), "\"extra\": 1,\n  ");
  CHECK_THROWS_AS(parse_config(with_unknown), ConfigError);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);

  ExperimentConfig both = sample_config();
  both.schedule.growth_k = 2.0;  // beta_end is already set
  CHECK_THROWS_AS(parse_config(serialize_config(both)), ConfigError);

  ExperimentConfig bad_eps = sample_config();
  bad_eps.privacy.epsilon = -1.0;
  CHECK_THROWS_AS(parse_config(serialize_config(bad_eps)), ConfigError);

  ExperimentConfig bad_obj = sample_config();
  bad_obj.objective.name = "mystery";
  CHECK_THROWS_AS(parse_config(serialize_config(bad_obj)), ConfigError);
}

TEST_CASE("checkpoint: write/read/write is byte-identical") {
  TempDir dir;
  Checkpoint ckpt;
  ckpt.theta = ParameterVector({0.1, -0.0, 1e-308, 3.5e300, -2.25});
  ckpt.mask = {true, false, true, true, false};
  ckpt.importance_diag = {1.2, 0.0, 1.0, 0.9, 0.0};

  const std::string first = dir.file("a.bin");
  const std::string second = dir.file("b.bin");
  write_checkpoint(ckpt, first);
  const Checkpoint loaded = read_checkpoint(first);
  write_checkpoint(loaded, second);
  CHECK(read_file_bytes(first) == read_file_bytes(second));

  REQUIRE(loaded.theta.dim() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(loaded.theta.values[i] == ckpt.theta.values[i]);
    CHECK(loaded.mask[i] == ckpt.mask[i]);
    CHECK(loaded.importance_diag[i] == ckpt.importance_diag[i]);
  }
  CHECK(std::signbit(loaded.theta.values[1]));
}

TEST_CASE("checkpoint: corrupt inputs rejected") {
  TempDir dir;
  const std::string path = dir.file("bad.bin");
  dpzo::testing::write_file(path, "NOTMAGIC________");
  CHECK_THROWS_AS(read_checkpoint(path), ConfigError);
  CHECK_THROWS_AS(read_checkpoint(dir.file("missing.bin")), ConfigError);

  Checkpoint ckpt;
  ckpt.theta = ParameterVector({1.0});
  ckpt.mask = {true, false};  // size mismatch
  ckpt.importance_diag = {1.0};
  CHECK_THROWS_AS(write_checkpoint(ckpt, dir.file("x.bin")), ConfigError);
}

TEST_CASE("metrics: fixed header and stable formatting") {
  CHECK(std::string(MetricsLog::csv_header()) ==
        "stage,iteration,loss,beta,eta,sigma,clip_fraction,"
        "grad_norm_estimate,epsilon_spent_estimate");

  MetricsLog log;
  MetricsRow row;
  row.stage = 1;
  row.iteration = 2;
  row.loss = 0.1;
  row.beta = 1e-6;
  row.eta = 5e-5;
  row.sigma = 0.79661483606938201;
  row.clip_fraction = 0.25;
  row.grad_norm_estimate = 3.0;
  row.epsilon_spent_estimate = std::numeric_limits<double>::infinity();
  log.rows.push_back(row);

  const std::string csv = log.to_csv();
  CHECK(csv == log.to_csv());
  CHECK(csv.find("inf") != std::string::npos);
  // Values parse back to the exact doubles (shortest round-trip format).
  CHECK(std::stod(dpzo::format_double(row.sigma)) == row.sigma);
  CHECK(dpzo::format_double(0.1) == "0.1");
  CHECK(dpzo::format_double(-0.0) == "-0");
}
