#include "dpzo/direction.hpp"

#include <cmath>
#include <string>

#include "dpzo/errors.hpp"

namespace dpzo {

DirectionDistribution DirectionDistribution::identity(std::size_t dim) {
  DirectionDistribution dist;
  dist.mask.assign(dim, true);
  dist.importance_diag.assign(dim, 1.0);
  return dist;
}

void DirectionDistribution::validate() const {
  if (mask.size() != importance_diag.size()) {
    throw ConfigError("DirectionDistribution: mask/diag size mismatch");
  }
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double s = importance_diag[i];
    if (!std::isfinite(s) || s < 0.0) {
      throw ConfigError("DirectionDistribution: invalid scale at index " +
                        std::to_string(i));
    }
    if (!mask[i] && s != 0.0) {
      throw ConfigError("DirectionDistribution: masked coordinate " +
                        std::to_string(i) + " has nonzero scale");
    }
  }
}

Direction sample_direction(const DirectionDistribution& dist, uint64_t seed,
                           uint32_t stage, uint32_t iteration, uint32_t index,
                           Stream stream) {
  Direction dir;
  dir.index = index;
  dir.origin_seed = seed;
  dir.values.resize(dist.dim());
  for (std::size_t i = 0; i < dist.dim(); ++i) {
    if (!dist.mask[i]) {
      dir.values[i] = 0.0;
      continue;
    }
    const double z = normal_draw(seed, stream, stage, iteration, index, i);
    dir.values[i] = dist.importance_diag[i] * z;
  }
  return dir;
}

}  // namespace dpzo
