#ifndef DPZO_DIRECTION_HPP
#define DPZO_DIRECTION_HPP

#include <cstdint>
#include <vector>

#include "dpzo/param_vector.hpp"
#include "dpzo/rng.hpp"

namespace dpzo {

// One sampled perturbation direction. Reproducible from
// (origin_seed, stage, iteration, index) alone.
struct Direction {
  std::vector<double> values;
  uint32_t index = 0;
  uint64_t origin_seed = 0;

  std::size_t dim() const { return values.size(); }
};

// The direction distribution: a diagonal scaling of N(0, I_d) plus a
// trainability mask. Masked-out coordinates always carry zero scale, so
// frozen parameters never receive a perturbation.
struct DirectionDistribution {
  std::vector<bool> mask;
  std::vector<double> importance_diag;

  std::size_t dim() const { return mask.size(); }

  // mask all-true, diag all-one: plain standard normal directions.
  static DirectionDistribution identity(std::size_t dim);

  // Throws ConfigError if sizes differ, a masked coordinate has nonzero
  // scale, or any scale is negative/non-finite.
  void validate() const;
};

// Coordinate i of the result is importance_diag[i] * z_i with z_i the
// standard-normal draw keyed by (seed, stream, stage, iteration, index, i).
// Masked coordinates are written as exact zeros without consuming a draw
// (counter-based draws are per-coordinate, so skipping cannot shift others).
Direction sample_direction(const DirectionDistribution& dist, uint64_t seed,
                           uint32_t stage, uint32_t iteration, uint32_t index,
                           Stream stream = Stream::kDirection);

}  // namespace dpzo

#endif  // DPZO_DIRECTION_HPP
