#ifndef DPZO_MODELS_HPP
#define DPZO_MODELS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpzo/layered_shape.hpp"
#include "dpzo/param_vector.hpp"
#include "dpzo/zo_estimator.hpp"

namespace dpzo {

// Seeded synthetic dataset; a pure function of (generator, seed, n).
struct Dataset {
  std::vector<DataSample> samples;
  uint64_t seed = 0;
  std::string generator;

  std::size_t n() const { return samples.size(); }
};

// A desk-scale objective with known structure. Objectives that take no data
// carry a single dummy sample so the estimator's batch machinery applies
// uniformly.
struct BenchObjective {
  std::string name;
  LossEvaluator loss;
  // Gradient of the mean loss over `data`; null when no analytic form is
  // exposed (the MLP).
  std::function<ParameterVector(const ParameterVector&)> analytic_gradient;
  std::optional<double> lipschitz_L;
  std::optional<double> weakly_convex_rho;
  ParameterVector initial_theta;
  std::optional<LayeredShape> shape;
  Dataset data;

  double mean_loss(const ParameterVector& theta) const;
};

// f(theta) = 1/2 (theta - theta*)^T A (theta - theta*), A diagonal with
// eigenvalues log-spaced in [1, condition_number].
BenchObjective make_quadratic(std::size_t d, double condition_number,
                              uint64_t seed);

std::vector<double> quadratic_eigenvalues(std::size_t d,
                                          double condition_number);

// f(theta) = L * ||theta - theta*||_2; Lipschitz constant exactly L.
BenchObjective make_lipschitz_norm(std::size_t d, double L, uint64_t seed);

// Logistic loss on margin-separable synthetic data plus the bounded
// nonconvex regularizer rho * sum_i theta_i^2 / (1 + theta_i^2).
// Labels are +-1, balanced. weakly_convex_rho is documented as 2*rho.
BenchObjective make_weakly_convex_logistic(std::size_t d, std::size_t n,
                                           double rho, uint64_t seed);

enum class Activation { kRelu, kTanh };

// Forward-only MLP over flattened weights (no biases), mean cross-entropy
// on a seeded synthetic batch. layer_dims = [in, hidden..., num_classes];
// at least two weight matrices, total parameters <= 1e5.
BenchObjective make_tiny_mlp(const std::vector<std::size_t>& layer_dims,
                             Activation activation, uint64_t seed,
                             std::size_t n_samples = 128);

// CSV round trip, header `f0,...,f{d-1},label`, LF newlines, shortest
// round-trip number formatting.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& csv, uint64_t seed,
                         const std::string& generator);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

}  // namespace dpzo

#endif  // DPZO_MODELS_HPP
