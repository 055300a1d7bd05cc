#ifndef DPZO_TESTS_SUPPORT_SYNFLOW_ORACLE_HPP
#define DPZO_TESTS_SUPPORT_SYNFLOW_ORACLE_HPP

#include <cmath>
#include <vector>

#include "dpzo/layered_shape.hpp"
#include "dpzo/param_vector.hpp"

namespace dpzo::testing {

// Row-major chain out of explicit matrices; fixture builder for saliency
// tests.
struct ChainFixture {
  ParameterVector theta;
  LayeredShape shape;
};

inline ChainFixture make_chain(
    const std::vector<std::vector<std::vector<double>>>& mats) {
  ChainFixture fx;
  std::size_t offset = 0;
  for (const auto& mat : mats) {
    const std::size_t rows = mat.size();
    const std::size_t cols = mat.front().size();
    fx.shape.layers.push_back(LayerBlock{rows, cols, offset, cols, 1});
    for (const auto& row : mat) {
      for (double v : row) fx.theta.values.push_back(v);
    }
    offset += rows * cols;
  }
  return fx;
}

// Analytic saliency oracle: left/right chain products give the exact
// gradient of the all-ones bilinear form; saliency is gradient (.) theta.
// Independent of the library's estimator path.
inline std::vector<double> analytic_saliency(const ParameterVector& theta,
                                             const LayeredShape& shape) {
  const std::size_t L = shape.layers.size();
  std::vector<std::vector<double>> rights(L);
  rights[L - 1].assign(shape.layers[L - 1].cols, 1.0);
  for (std::size_t l = L - 1; l > 0; --l) {
    const LayerBlock& layer = shape.layers[l];
    std::vector<double> out(layer.rows, 0.0);
    for (std::size_t i = 0; i < layer.rows; ++i) {
      for (std::size_t j = 0; j < layer.cols; ++j) {
        out[i] += std::fabs(theta.values[layer.flat(i, j)]) * rights[l][j];
      }
    }
    rights[l - 1] = std::move(out);
  }
  std::vector<std::vector<double>> lefts(L);
  lefts[0].assign(shape.layers[0].rows, 1.0);
  for (std::size_t l = 0; l + 1 < L; ++l) {
    const LayerBlock& layer = shape.layers[l];
    std::vector<double> out(layer.cols, 0.0);
    for (std::size_t j = 0; j < layer.cols; ++j) {
      for (std::size_t i = 0; i < layer.rows; ++i) {
        out[j] += lefts[l][i] * std::fabs(theta.values[layer.flat(i, j)]);
      }
    }
    lefts[l + 1] = std::move(out);
  }
  std::vector<double> saliency(theta.dim(), 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    const LayerBlock& layer = shape.layers[l];
    for (std::size_t i = 0; i < layer.rows; ++i) {
      for (std::size_t j = 0; j < layer.cols; ++j) {
        const std::size_t flat = layer.flat(i, j);
        saliency[flat] =
            lefts[l][i] * rights[l][j] * std::fabs(theta.values[flat]);
      }
    }
  }
  return saliency;
}

}  // namespace dpzo::testing

#endif  // DPZO_TESTS_SUPPORT_SYNFLOW_ORACLE_HPP
