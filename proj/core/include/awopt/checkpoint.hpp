#pragma once

#include <string>

#include "awopt/mlp.hpp"

namespace awopt::nn {

// Flat binary checkpoint: format version byte, then the ordered list of layer
// shapes (rows, cols, activation) followed by row-major weight values and the
// bias vector for each layer. Little-endian, 64-bit reals.
void save_checkpoint(const MlpParams& params, const std::string& path);
MlpParams load_checkpoint(const std::string& path);

}  // namespace awopt::nn
