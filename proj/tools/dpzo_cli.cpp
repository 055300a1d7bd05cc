// Command-line front end: calibrate | schedule | prune | train | eval.
// Exit codes: 0 success, 2 config/usage error, 3 numeric failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpzo/checkpoint.hpp"
#include "dpzo/config.hpp"
#include "dpzo/dp_mechanism.hpp"
#include "dpzo/errors.hpp"
#include "dpzo/experiment.hpp"
#include "dpzo/metrics.hpp"
#include "dpzo/models.hpp"
#include "dpzo/stagewise.hpp"

namespace {

double parse_eps(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw dpzo::ConfigError("calibrate: bad epsilon '" + text + "'");
  }
}

std::string fmt(double v) { return dpzo::format_double(v); }

int cmd_calibrate(const std::string& eps_text, double delta, uint64_t T,
                  uint32_t P, uint32_t m, uint64_t n, double c1, double c2,
                  std::optional<double> delta_prime) {
  const double eps = parse_eps(eps_text);
  const double q = static_cast<double>(m) / static_cast<double>(n);
  if (delta >= 1.0 / static_cast<double>(n)) {
    std::cerr << "warning: delta >= 1/n\n";
  }

  const auto th1 = dpzo::calibrate_sigma_theorem1(eps, delta, T, P, m, n, c1, c2);
  const auto ma = dpzo::calibrate_sigma_ma(eps, delta, T, q, c1, c2);
  std::cout << "sigma_theorem1=" << fmt(th1.sigma) << " regime="
            << (th1.within_stated_regime ? "ok" : "outside stated regime")
            << "\n";
  std::cout << "sigma_lemma3=" << fmt(ma.sigma) << " regime="
            << (ma.within_stated_regime ? "ok" : "outside stated regime")
            << "\n";

  if (std::isinf(eps)) {
    std::cout << "amplified_eps=inf amplified_delta=" << fmt(q * delta) << "\n";
    std::cout << "composed_eps=inf composed_delta=n/a\n";
    return 0;
  }
  const auto amplified = dpzo::amplify_by_subsampling(eps, delta, q);
  std::cout << "amplified_eps=" << fmt(amplified.first)
            << " amplified_delta=" << fmt(amplified.second) << "\n";
  const double dp = delta_prime.value_or(delta);
  const auto composed =
      dpzo::strong_compose(amplified.first, amplified.second, T, dp);
  std::cout << "composed_eps=" << fmt(composed.first)
            << " composed_delta=" << fmt(composed.second) << "\n";
  return 0;
}

int cmd_schedule(const std::string& config_path) {
  const dpzo::ExperimentConfig cfg = dpzo::load_config(config_path);
  const dpzo::StageSchedule schedule = dpzo::build_schedule(cfg.schedule);
  std::cout << "s beta eta T eta_T\n";
  for (const auto& params : schedule.all_stages()) {
    std::cout << params.s << " " << fmt(params.beta) << " " << fmt(params.eta)
              << " " << params.T << " "
              << fmt(params.eta * static_cast<double>(params.T)) << "\n";
  }
  std::cout << "total_steps=" << schedule.total_steps() << "\n";
  return 0;
}

int cmd_prune(const std::string& config_path, const std::string& out_dir) {
  const dpzo::ExperimentConfig cfg = dpzo::load_config(config_path);
  const dpzo::PruneReport report = dpzo::run_prune(cfg);

  std::cout << "kept=" << report.kept << "/" << report.dim << "\n";
  double diag_min = std::numeric_limits<double>::infinity();
  double diag_max = 0.0;
  for (std::size_t i = 0; i < report.dist.mask.size(); ++i) {
    if (!report.dist.mask[i]) continue;
    diag_min = std::min(diag_min, report.dist.importance_diag[i]);
    diag_max = std::max(diag_max, report.dist.importance_diag[i]);
  }
  std::cout << "diag_min=" << fmt(diag_min) << " diag_max=" << fmt(diag_max)
            << "\n";
  std::cout << "synflow_loss=" << fmt(report.synflow_loss_value) << "\n";
  for (std::size_t l = 0; l < report.layer_saliency_sums.size(); ++l) {
    std::cout << "layer_saliency_sum[" << l
              << "]=" << fmt(report.layer_saliency_sums[l]) << "\n";
  }

  // Score histogram: 10 equal-width buckets over [min, max].
  double score_min = report.score.values[0];
  double score_max = report.score.values[0];
  for (double v : report.score.values) {
    score_min = std::min(score_min, v);
    score_max = std::max(score_max, v);
  }
  std::cout << "score_min=" << fmt(score_min) << " score_max=" << fmt(score_max)
            << "\n";
  const double width = score_max > score_min ? (score_max - score_min) : 1.0;
  std::vector<std::size_t> buckets(10, 0);
  for (double v : report.score.values) {
    auto b = static_cast<std::size_t>((v - score_min) / width * 10.0);
    buckets[std::min<std::size_t>(b, 9)] += 1;
  }
  std::cout << "score_histogram=";
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    std::cout << (b == 0 ? "" : ",") << buckets[b];
  }
  std::cout << "\n";

  const dpzo::BenchObjective objective =
      dpzo::build_objective(cfg.objective, cfg.seed);
  dpzo::Checkpoint ckpt;
  ckpt.theta = objective.initial_theta;
  ckpt.mask = report.dist.mask;
  ckpt.importance_diag = report.dist.importance_diag;
  std::filesystem::create_directories(out_dir);
  dpzo::write_checkpoint(ckpt, out_dir + "/checkpoint.bin");
  return 0;
}

int cmd_train(const std::string& config_path, std::optional<uint64_t> seed,
              const std::string& out_dir, int workers,
              const std::string& export_data) {
  dpzo::ExperimentConfig cfg = dpzo::load_config(config_path);
  if (seed) cfg.seed = *seed;
  const dpzo::ExperimentResult result = dpzo::run_experiment(cfg, workers);

  std::filesystem::create_directories(out_dir);
  result.metrics.write_csv(out_dir + "/metrics.csv");
  dpzo::write_checkpoint(dpzo::result_checkpoint(result),
                         out_dir + "/checkpoint.bin");
  if (!export_data.empty()) {
    const dpzo::BenchObjective objective =
        dpzo::build_objective(cfg.objective, cfg.seed);
    dpzo::write_dataset_csv(objective.data, export_data);
  }
  std::cout << "final_loss=" << fmt(result.final_loss)
            << " epsilon=" << fmt(cfg.privacy.epsilon)
            << " sigma=" << fmt(result.sigma) << " kept=" << result.kept << "/"
            << result.dim << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& ckpt_path) {
  const dpzo::ExperimentConfig cfg = dpzo::load_config(config_path);
  const dpzo::BenchObjective objective =
      dpzo::build_objective(cfg.objective, cfg.seed);
  const dpzo::Checkpoint ckpt = dpzo::read_checkpoint(ckpt_path);
  if (ckpt.theta.dim() != objective.initial_theta.dim()) {
    throw dpzo::ConfigError("eval: checkpoint dimension does not match objective");
  }
  std::size_t kept = 0;
  for (bool b : ckpt.mask) kept += b ? 1 : 0;
  std::cout << "loss=" << fmt(objective.mean_loss(ckpt.theta))
            << " kept=" << kept << "/" << ckpt.theta.dim() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private zeroth-order optimization"};
  app.require_subcommand(1);

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "Print noise calibrations and composition bounds");
  std::string eps_text;
  double delta = 0.0, c1 = 1.0, c2 = 1.0;
  uint64_t T = 0, n = 0;
  uint32_t P = 1, m = 1;
  std::optional<double> delta_prime;
  calibrate->add_option("--eps", eps_text, "target epsilon or 'inf'")->required();
  calibrate->add_option("--delta", delta, "target delta")->required();
  calibrate->add_option("--T", T, "total steps")->required();
  calibrate->add_option("--P", P, "directions per step")->required();
  calibrate->add_option("--m", m, "batch size")->required();
  calibrate->add_option("--n", n, "dataset size")->required();
  calibrate->add_option("--c1", c1, "accountant constant c1");
  calibrate->add_option("--c2", c2, "accountant constant c2");
  calibrate->add_option("--delta-prime", delta_prime,
                        "slack delta for strong composition (default: delta)");

  // schedule / prune / train / eval share --config
  std::string config_path, out_dir = ".", ckpt_path, export_data;
  std::optional<uint64_t> seed;
  int workers = 1;

  auto* schedule =
      app.add_subcommand("schedule", "Print the per-stage schedule table");
  schedule->add_option("--config", config_path, "config JSON path")->required();

  auto* prune = app.add_subcommand(
      "prune", "Data-free saliency, mask and importance matrix");
  prune->add_option("--config", config_path, "config JSON path")->required();
  prune->add_option("--out", out_dir, "output directory");

  auto* train = app.add_subcommand("train", "Run the stagewise optimizer");
  train->add_option("--config", config_path, "config JSON path")->required();
  train->add_option("--seed", seed, "override config seed");
  train->add_option("--out", out_dir, "output directory");
  train->add_option("--workers", workers, "parallel evaluation workers");
  train->add_option("--export-data", export_data,
                    "write the training dataset as CSV");

  auto* eval =
      app.add_subcommand("eval", "Evaluate a checkpoint on the objective");
  eval->add_option("--config", config_path, "config JSON path")->required();
  eval->add_option("--checkpoint", ckpt_path, "checkpoint path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (calibrate->parsed()) {
      return cmd_calibrate(eps_text, delta, T, P, m, n, c1, c2, delta_prime);
    }
    if (schedule->parsed()) return cmd_schedule(config_path);
    if (prune->parsed()) return cmd_prune(config_path, out_dir);
    if (train->parsed()) {
      return cmd_train(config_path, seed, out_dir, workers, export_data);
    }
    if (eval->parsed()) return cmd_eval(config_path, ckpt_path);
  } catch (const dpzo::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dpzo::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
