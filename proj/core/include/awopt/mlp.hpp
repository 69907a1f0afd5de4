#pragma once

#include <cstdint>
#include <vector>

#include "awopt/matrix.hpp"
#include "awopt/rng.hpp"

namespace awopt::nn {

enum class Activation : std::uint8_t { kRelu = 0, kTanh = 1, kIdentity = 2 };

struct Layer {
  Matrix weight;              // out_dim x in_dim
  std::vector<double> bias;   // out_dim
  Activation activation = Activation::kIdentity;

  std::size_t in_dim() const { return weight.cols(); }
  std::size_t out_dim() const { return weight.rows(); }

  bool operator==(const Layer&) const = default;
};

// Fully connected network. Consecutive layer dimensions must chain and the
// final layer is expected to use the identity activation.
struct MlpParams {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.front().in_dim(); }
  std::size_t output_dim() const { return layers.back().out_dim(); }
  std::size_t parameter_count() const;

  // Throws ShapeError if layer dimensions do not chain.
  void validate() const;

  bool operator==(const MlpParams&) const = default;
};

// Gradients with the same layout as the parameters they mirror.
struct MlpGrads {
  std::vector<Layer> layers;  // activation fields unused

  void add_scaled(const MlpGrads& other, double scale);
  void scale(double factor);
  bool all_finite() const;
};

MlpGrads zeros_like(const MlpParams& params);

// Builds a network with the given layer widths, relu on hidden layers and
// identity output. Weights are initialized uniform in
// +-sqrt(6 / (fan_in + fan_out)), biases zero.
MlpParams make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                   std::size_t output_dim, Rng& rng);

// Forward pass; throws ShapeError on input dimension mismatch.
std::vector<double> forward(const MlpParams& params, const std::vector<double>& input);

// Row-wise forward over a batch (inputs: n x in_dim -> n x out_dim). Each row
// matches forward() on that row bit for bit.
Matrix forward_batch(const MlpParams& params, const Matrix& inputs);

// Reverse-mode gradients of dot(output, upstream_grad) with respect to all
// parameters and to the input.
struct BackwardResult {
  MlpGrads param_grads;
  std::vector<double> input_grad;
};
BackwardResult backward(const MlpParams& params, const std::vector<double>& input,
                        const std::vector<double>& upstream_grad);

}  // namespace awopt::nn
