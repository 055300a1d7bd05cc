#include "dpzo/layered_shape.hpp"

#include <string>
#include <vector>

#include "dpzo/errors.hpp"

namespace dpzo {

std::size_t LayeredShape::total_entries() const {
  std::size_t total = 0;
  for (const LayerBlock& layer : layers) total += layer.rows * layer.cols;
  return total;
}

void LayeredShape::validate(std::size_t d) const {
  if (layers.empty()) throw ConfigError("LayeredShape: no layers");
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    if (layers[l].cols != layers[l + 1].rows) {
      throw ConfigError("LayeredShape: chain break between layers " +
                        std::to_string(l) + " and " + std::to_string(l + 1));
    }
  }
  if (total_entries() != d) {
    throw ConfigError("LayeredShape: entries (" +
                      std::to_string(total_entries()) +
                      ") do not match parameter count (" + std::to_string(d) +
                      ")");
  }
  std::vector<bool> seen(d, false);
  for (const LayerBlock& layer : layers) {
    for (std::size_t i = 0; i < layer.rows; ++i) {
      for (std::size_t j = 0; j < layer.cols; ++j) {
        const std::size_t flat = layer.flat(i, j);
        if (flat >= d || seen[flat]) {
          throw ConfigError("LayeredShape: flat index " + std::to_string(flat) +
                            " out of range or duplicated");
        }
        seen[flat] = true;
      }
    }
  }
}

}  // namespace dpzo
