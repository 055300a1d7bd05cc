#ifndef DPZO_CHECKPOINT_HPP
#define DPZO_CHECKPOINT_HPP

#include <string>
#include <vector>

#include "dpzo/param_vector.hpp"

namespace dpzo {

// Checkpoint layout (little-endian throughout):
//   8 bytes  ASCII magic "DPZOCKPT"
//   u64      d
//   d x f64  theta
//   d bytes  mask (0/1)
//   d x f64  importance diagonal
struct Checkpoint {
  ParameterVector theta;
  std::vector<bool> mask;
  std::vector<double> importance_diag;
};

void write_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace dpzo

#endif  // DPZO_CHECKPOINT_HPP
