#pragma once

#include <cstdint>
#include <vector>

#include "awopt/mlp.hpp"

namespace awopt::nn {

enum class OptimizerKind : std::uint8_t { kSgd = 0, kAdam = 1 };

// Per-parameter optimizer state. Moment buffers mirror the parameter shapes.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Layer> m;  // first moments (adam only)
  std::vector<Layer> v;  // second moments (adam only)
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate,
                              const MlpParams& params);

// In-place gradient step. sgd: p -= lr * g. adam: bias-corrected moments.
// Throws NumericError if any gradient entry is non-finite (params untouched).
void apply_gradients(MlpParams& params, const MlpGrads& grads, OptimizerState& state);

}  // namespace awopt::nn
