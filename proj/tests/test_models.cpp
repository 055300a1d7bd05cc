#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dpzo/errors.hpp"
#include "dpzo/models.hpp"
#include "support/test_util.hpp"

using namespace dpzo;
using dpzo::testing::central_diff_gradient;

namespace {

const DataSample kDummy{{0.0}, 0.0};

// Test-local backprop for the no-bias tanh MLP; the independent oracle for
// the forward-only implementation.
struct MlpOracle {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> offsets;

  ParameterVector gradient(const ParameterVector& theta,
                           const DataSample& sample) const {
    const std::size_t L = dims.size() - 1;
    std::vector<std::vector<double>> activations;  // h_0 .. h_{L-1}
    activations.push_back(sample.features);
    std::vector<double> logits;
    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t in = dims[l];
      const std::size_t out = dims[l + 1];
      std::vector<double> a(out, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        for (std::size_t i = 0; i < in; ++i) {
          a[o] += theta.values[offsets[l] + o * in + i] * activations[l][i];
        }
      }
      if (l + 1 < L) {
        for (double& v : a) v = std::tanh(v);
        activations.push_back(a);
      } else {
        logits = a;
      }
    }
    double max_logit = logits[0];
    for (double v : logits) max_logit = std::max(max_logit, v);
    double z = 0.0;
    for (double v : logits) z += std::exp(v - max_logit);
    std::vector<double> delta(logits.size());
    const auto label = static_cast<std::size_t>(sample.label);
    for (std::size_t k = 0; k < logits.size(); ++k) {
      delta[k] = std::exp(logits[k] - max_logit) / z - (k == label ? 1.0 : 0.0);
    }

    ParameterVector grad(theta.dim());
    for (std::size_t l = L; l-- > 0;) {
      const std::size_t in = dims[l];
      const std::size_t out = dims[l + 1];
      for (std::size_t o = 0; o < out; ++o) {
        for (std::size_t i = 0; i < in; ++i) {
          grad.values[offsets[l] + o * in + i] = delta[o] * activations[l][i];
        }
      }
      if (l == 0) break;
      std::vector<double> prev(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        for (std::size_t o = 0; o < out; ++o) {
          prev[i] += theta.values[offsets[l] + o * in + i] * delta[o];
        }
        prev[i] *= 1.0 - activations[l][i] * activations[l][i];
      }
      delta = std::move(prev);
    }
    return grad;
  }
};

}  // namespace

TEST_CASE("make_quadratic: optimum, identity case, eigenvalues") {
  const BenchObjective identity_case = make_quadratic(5, 1.0, 3);
  // Recover the optimum via one analytic gradient step from initial theta:
  // with A = I the gradient at theta is theta - theta*.
  const ParameterVector g = identity_case.analytic_gradient(
      identity_case.initial_theta);
  ParameterVector optimum(5);
  for (std::size_t i = 0; i < 5; ++i) {
    optimum.values[i] = identity_case.initial_theta.values[i] - g.values[i];
  }
  CHECK(identity_case.mean_loss(optimum) == doctest::Approx(0.0).epsilon(1e-18));

  ParameterVector shifted = optimum;
  shifted.values[0] += 1.0;
  const ParameterVector grad_e1 = identity_case.analytic_gradient(shifted);
  CHECK(grad_e1.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(grad_e1.values[i] == doctest::Approx(0.0).epsilon(1e-12));
  }

  const auto eig = quadratic_eigenvalues(10, 100.0);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(eig[i] ==
          doctest::Approx(std::pow(100.0, static_cast<double>(i) / 9.0))
              .epsilon(1e-12));
  }
  CHECK(eig.front() == 1.0);
  CHECK(eig.back() == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("make_lipschitz_norm: values and Lipschitz property") {
  const double L = 2.5;
  const BenchObjective obj = make_lipschitz_norm(6, L, 41);
  // theta* from the gradient direction at the initial point.
  const ParameterVector g = obj.analytic_gradient(obj.initial_theta);
  const double f0 = obj.mean_loss(obj.initial_theta);
  ParameterVector optimum(6);
  for (std::size_t i = 0; i < 6; ++i) {
    optimum.values[i] =
        obj.initial_theta.values[i] - g.values[i] * (f0 / (L * L));
  }
  CHECK(obj.mean_loss(optimum) == doctest::Approx(0.0).epsilon(1e-9));
  ParameterVector shifted = optimum;
  shifted.values[2] += 1.0;
  CHECK(obj.mean_loss(shifted) == doctest::Approx(L).epsilon(1e-9));

  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 10000; ++trial) {
    ParameterVector a(6), b(6);
    for (std::size_t i = 0; i < 6; ++i) {
      a.values[i] = normal(gen);
      b.values[i] = normal(gen);
    }
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      const double diff = a.values[i] - b.values[i];
      dist_sq += diff * diff;
    }
    CHECK(std::fabs(obj.mean_loss(a) - obj.mean_loss(b)) <=
          L * std::sqrt(dist_sq) * (1.0 + 1e-12));
  }
}

TEST_CASE("make_weakly_convex_logistic: structure") {
  const BenchObjective obj = make_weakly_convex_logistic(8, 32, 0.1, 9);
  CHECK(obj.mean_loss(ParameterVector(8)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(*obj.weakly_convex_rho == doctest::Approx(0.2));
  CHECK(obj.data.n() == 32);
  // Balanced labels.
  int positive = 0;
  for (const auto& sample : obj.data.samples) {
    positive += sample.label > 0 ? 1 : 0;
  }
  CHECK(positive == 16);

  const BenchObjective convex = make_weakly_convex_logistic(8, 32, 0.0, 9);
  CHECK(convex.mean_loss(ParameterVector(8)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // The regularizer only adds loss away from the origin.
  ParameterVector off(8);
  off.values[0] = 2.0;
  CHECK(obj.mean_loss(off) > convex.mean_loss(off));
}

TEST_CASE("gradient-descent oracle baseline on the logistic benchmark") {
  const BenchObjective obj = make_weakly_convex_logistic(20, 512, 0.1, 2024);
  const ParameterVector final_theta = dpzo::testing::gradient_descent_oracle(
      obj.analytic_gradient, obj.initial_theta, 0.01, 2000);
  CHECK(obj.mean_loss(final_theta) <= 0.05);
}

TEST_CASE("analytic gradients pass the finite-difference self-test") {
  struct Case {
    BenchObjective obj;
    uint64_t seed;
  };
  std::vector<Case> cases;
  cases.push_back({make_quadratic(8, 25.0, 1), 100});
  cases.push_back({make_lipschitz_norm(8, 1.5, 2), 200});
  cases.push_back({make_weakly_convex_logistic(10, 64, 0.1, 3), 300});

  for (const Case& c : cases) {
    std::mt19937_64 gen(c.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto mean_loss = [&](const ParameterVector& theta) {
      return c.obj.mean_loss(theta);
    };
    for (int point = 0; point < 100; ++point) {
      ParameterVector theta(c.obj.initial_theta.dim());
      for (auto& v : theta.values) v = normal(gen);
      const ParameterVector analytic = c.obj.analytic_gradient(theta);
      const ParameterVector numeric = central_diff_gradient(mean_loss, theta);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < theta.dim(); ++i) {
        const double diff = analytic.values[i] - numeric.values[i];
        num += diff * diff;
        den += analytic.values[i] * analytic.values[i];
      }
      CHECK(std::sqrt(num) <= 1e-6 * std::max(1.0, std::sqrt(den)));
    }
  }
}

TEST_CASE("make_tiny_mlp: uniform output at zero weights") {
  const BenchObjective obj = make_tiny_mlp({4, 4, 3}, Activation::kTanh, 5, 12);
  const ParameterVector zeros(obj.initial_theta.dim());
  for (const auto& sample : obj.data.samples) {
    CHECK(obj.loss.evaluate(zeros, sample) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("make_tiny_mlp: deterministic construction") {
  const BenchObjective a = make_tiny_mlp({4, 6, 3}, Activation::kTanh, 77, 16);
  const BenchObjective b = make_tiny_mlp({4, 6, 3}, Activation::kTanh, 77, 16);
  for (std::size_t i = 0; i < a.initial_theta.dim(); ++i) {
    CHECK(a.initial_theta.values[i] == b.initial_theta.values[i]);
  }
  for (std::size_t s = 0; s < a.data.n(); ++s) {
    CHECK(a.data.samples[s].label == b.data.samples[s].label);
    for (std::size_t i = 0; i < a.data.samples[s].features.size(); ++i) {
      CHECK(a.data.samples[s].features[i] == b.data.samples[s].features[i]);
    }
  }
  CHECK(a.mean_loss(a.initial_theta) == b.mean_loss(b.initial_theta));
}

TEST_CASE("make_tiny_mlp: forward pass matches the backprop oracle") {
  const std::vector<std::size_t> dims = {4, 6, 3};
  const BenchObjective obj = make_tiny_mlp(dims, Activation::kTanh, 31, 8);
  MlpOracle oracle;
  oracle.dims = dims;
  oracle.offsets = {0, 4 * 6};

  std::mt19937_64 gen(14);
  std::uniform_int_distribution<std::size_t> coord(0, obj.initial_theta.dim() - 1);
  const DataSample& sample = obj.data.samples[3];
  const ParameterVector theta = obj.initial_theta;
  const ParameterVector grad = oracle.gradient(theta, sample);

  for (int k = 0; k < 20; ++k) {
    const std::size_t i = coord(gen);
    const double h = 1e-6 * (1.0 + std::fabs(theta.values[i]));
    ParameterVector probe = theta;
    probe.values[i] = theta.values[i] + h;
    const double f_plus = obj.loss.evaluate(probe, sample);
    probe.values[i] = theta.values[i] - h;
    const double f_minus = obj.loss.evaluate(probe, sample);
    const double numeric = (f_plus - f_minus) / (2.0 * h);
    CHECK(numeric ==
          doctest::Approx(grad.values[i]).epsilon(1e-4).scale(1e-4));
  }
}

TEST_CASE("make_tiny_mlp: validation") {
  CHECK_THROWS_AS(make_tiny_mlp({4, 3}, Activation::kTanh, 1, 8), ConfigError);
  CHECK_THROWS_AS(make_tiny_mlp({4, 5, 1}, Activation::kTanh, 1, 8),
                  ConfigError);
  CHECK_THROWS_AS(make_tiny_mlp({400, 400, 2}, Activation::kTanh, 1, 8),
                  ConfigError);
  CHECK_NOTHROW(make_tiny_mlp({4, 5, 2}, Activation::kRelu, 1, 8));
}

TEST_CASE("dataset: pure function of seed, CSV round trip") {
  const BenchObjective a = make_weakly_convex_logistic(5, 16, 0.1, 404);
  const BenchObjective b = make_weakly_convex_logistic(5, 16, 0.1, 404);
  const std::string csv_a = dataset_to_csv(a.data);
  const std::string csv_b = dataset_to_csv(b.data);
  CHECK(csv_a == csv_b);

  const Dataset parsed = dataset_from_csv(csv_a, a.data.seed, a.data.generator);
  REQUIRE(parsed.n() == a.data.n());
  for (std::size_t s = 0; s < parsed.n(); ++s) {
    CHECK(parsed.samples[s].label == a.data.samples[s].label);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(parsed.samples[s].features[i] == a.data.samples[s].features[i]);
    }
  }
  CHECK(csv_a.substr(0, csv_a.find('\n')) == "f0,f1,f2,f3,f4,label");

  CHECK_THROWS_AS(dataset_from_csv("bogus\n1,2\n", 0, "x"), ConfigError);
  CHECK_THROWS_AS(dataset_from_csv("f0,label\n1\n", 0, "x"), ConfigError);
}
