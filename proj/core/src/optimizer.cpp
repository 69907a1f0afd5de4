#include "awopt/optimizer.hpp"

#include <cmath>

#include "awopt/errors.hpp"

namespace awopt::nn {
namespace {

void check_shapes(const MlpParams& params, const MlpGrads& grads) {
  if (grads.layers.size() != params.layers.size()) {
    throw ShapeError("apply_gradients: layer count mismatch");
  }
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    if (grads.layers[k].weight.rows() != params.layers[k].weight.rows() ||
        grads.layers[k].weight.cols() != params.layers[k].weight.cols() ||
        grads.layers[k].bias.size() != params.layers[k].bias.size()) {
      throw ShapeError("apply_gradients: gradient shape mismatch at layer " +
                       std::to_string(k));
    }
  }
}

void adam_update(std::vector<double>& p, const std::vector<double>& g,
                 std::vector<double>& m, std::vector<double>& v,
                 const OptimizerState& s, double bc1, double bc2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    p[i] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

}  // namespace

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate,
                              const MlpParams& params) {
  OptimizerState state;
  state.kind = kind;
  state.learning_rate = learning_rate;
  if (kind == OptimizerKind::kAdam) {
    MlpGrads z = zeros_like(params);
    state.m = z.layers;
    state.v = z.layers;
  }
  return state;
}

void apply_gradients(MlpParams& params, const MlpGrads& grads, OptimizerState& state) {
  check_shapes(params, grads);
  if (!grads.all_finite()) {
    throw NumericError("apply_gradients: non-finite gradient entries");
  }

  if (state.kind == OptimizerKind::kSgd) {
    for (std::size_t k = 0; k < params.layers.size(); ++k) {
      auto& w = params.layers[k].weight.values();
      const auto& gw = grads.layers[k].weight.values();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= state.learning_rate * gw[i];
      auto& b = params.layers[k].bias;
      const auto& gb = grads.layers[k].bias;
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= state.learning_rate * gb[i];
    }
    ++state.step;
    return;
  }

  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    adam_update(params.layers[k].weight.values(), grads.layers[k].weight.values(),
                state.m[k].weight.values(), state.v[k].weight.values(), state, bc1, bc2);
    adam_update(params.layers[k].bias, grads.layers[k].bias, state.m[k].bias,
                state.v[k].bias, state, bc1, bc2);
  }
}

}  // namespace awopt::nn
