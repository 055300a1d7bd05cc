#ifndef DPZO_LAYERED_SHAPE_HPP
#define DPZO_LAYERED_SHAPE_HPP

#include <cstddef>
#include <vector>

namespace dpzo {

// One matrix in the saliency chain, viewed into flat parameter storage.
// Entry (i, j) lives at flat index offset + i*stride_row + j*stride_col,
// so a transposed view is just swapped strides.
struct LayerBlock {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;
  std::size_t stride_row = 0;
  std::size_t stride_col = 0;

  std::size_t flat(std::size_t i, std::size_t j) const {
    return offset + i * stride_row + j * stride_col;
  }
};

// Chain-compatible list of weight matrices: cols of layer l equal rows of
// layer l+1, and the blocks tile the flat vector exactly (total entries = d).
struct LayeredShape {
  std::vector<LayerBlock> layers;

  std::size_t total_entries() const;
  // Throws ConfigError on chain breaks or when entries do not sum to d.
  void validate(std::size_t d) const;
};

}  // namespace dpzo

#endif  // DPZO_LAYERED_SHAPE_HPP
