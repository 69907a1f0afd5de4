#include "awopt/mlp.hpp"

#include <cmath>
#include <string>

#include "awopt/errors.hpp"

namespace awopt::nn {
namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kIdentity:
      return z;
  }
  return z;
}

double activate_grad(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: {
      double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

// y = W x + b, then activation. Writes pre-activation into z if non-null.
void layer_forward(const Layer& layer, const double* x, double* y, double* z) {
  const std::size_t out = layer.out_dim();
  const std::size_t in = layer.in_dim();
  for (std::size_t i = 0; i < out; ++i) {
    const double* w = layer.weight.row(i);
    double acc = layer.bias[i];
    for (std::size_t j = 0; j < in; ++j) acc += w[j] * x[j];
    if (z) z[i] = acc;
    y[i] = activate(layer.activation, acc);
  }
}

}  // namespace

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw ShapeError("MlpParams: no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const Layer& l = layers[k];
    if (l.bias.size() != l.out_dim()) {
      throw ShapeError("MlpParams: layer " + std::to_string(k) + " bias size " +
                       std::to_string(l.bias.size()) + " != out dim " +
                       std::to_string(l.out_dim()));
    }
    if (k > 0 && layers[k - 1].out_dim() != l.in_dim()) {
      throw ShapeError("MlpParams: layer " + std::to_string(k) + " input dim " +
                       std::to_string(l.in_dim()) + " does not chain from " +
                       std::to_string(layers[k - 1].out_dim()));
    }
  }
}

void MlpGrads::add_scaled(const MlpGrads& other, double scale) {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    auto& w = layers[k].weight.values();
    const auto& ow = other.layers[k].weight.values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += scale * ow[i];
    for (std::size_t i = 0; i < layers[k].bias.size(); ++i)
      layers[k].bias[i] += scale * other.layers[k].bias[i];
  }
}

void MlpGrads::scale(double factor) {
  for (Layer& l : layers) {
    for (double& x : l.weight.values()) x *= factor;
    for (double& x : l.bias) x *= factor;
  }
}

bool MlpGrads::all_finite() const {
  for (const Layer& l : layers) {
    if (!l.weight.all_finite() || !awopt::nn::all_finite(l.bias)) return false;
  }
  return true;
}

MlpGrads zeros_like(const MlpParams& params) {
  MlpGrads g;
  g.layers.reserve(params.layers.size());
  for (const Layer& l : params.layers) {
    g.layers.push_back(Layer{Matrix(l.out_dim(), l.in_dim()),
                             std::vector<double>(l.out_dim(), 0.0), l.activation});
  }
  return g;
}

MlpParams make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                   std::size_t output_dim, Rng& rng) {
  std::vector<std::size_t> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(output_dim);

  MlpParams params;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const std::size_t in = dims[k];
    const std::size_t out = dims[k + 1];
    Layer layer;
    layer.weight = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    layer.activation =
        (k + 2 == dims.size()) ? Activation::kIdentity : Activation::kRelu;
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weight.values()) w = rng.uniform(-bound, bound);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

std::vector<double> forward(const MlpParams& params, const std::vector<double>& input) {
  if (input.size() != params.input_dim()) {
    throw ShapeError("forward: input dim " + std::to_string(input.size()) +
                     " != expected " + std::to_string(params.input_dim()));
  }
  std::vector<double> cur = input;
  std::vector<double> next;
  for (const Layer& l : params.layers) {
    next.assign(l.out_dim(), 0.0);
    layer_forward(l, cur.data(), next.data(), nullptr);
    cur.swap(next);
  }
  return cur;
}

Matrix forward_batch(const MlpParams& params, const Matrix& inputs) {
  if (inputs.cols() != params.input_dim()) {
    throw ShapeError("forward_batch: input dim " + std::to_string(inputs.cols()) +
                     " != expected " + std::to_string(params.input_dim()));
  }
  Matrix cur = inputs;
  for (const Layer& l : params.layers) {
    Matrix next(cur.rows(), l.out_dim());
    for (std::size_t r = 0; r < cur.rows(); ++r) {
      layer_forward(l, cur.row(r), next.row(r), nullptr);
    }
    cur = std::move(next);
  }
  return cur;
}

BackwardResult backward(const MlpParams& params, const std::vector<double>& input,
                        const std::vector<double>& upstream_grad) {
  if (input.size() != params.input_dim()) {
    throw ShapeError("backward: input dim mismatch");
  }
  if (upstream_grad.size() != params.output_dim()) {
    throw ShapeError("backward: upstream grad dim " +
                     std::to_string(upstream_grad.size()) + " != output dim " +
                     std::to_string(params.output_dim()));
  }

  const std::size_t n_layers = params.layers.size();
  std::vector<std::vector<double>> activations(n_layers + 1);
  std::vector<std::vector<double>> pre_acts(n_layers);
  activations[0] = input;
  for (std::size_t k = 0; k < n_layers; ++k) {
    const Layer& l = params.layers[k];
    activations[k + 1].assign(l.out_dim(), 0.0);
    pre_acts[k].assign(l.out_dim(), 0.0);
    layer_forward(l, activations[k].data(), activations[k + 1].data(),
                  pre_acts[k].data());
  }

  BackwardResult result;
  result.param_grads = zeros_like(params);
  std::vector<double> grad = upstream_grad;
  for (std::size_t k = n_layers; k-- > 0;) {
    const Layer& l = params.layers[k];
    Layer& g = result.param_grads.layers[k];
    const std::size_t out = l.out_dim();
    const std::size_t in = l.in_dim();
    std::vector<double> grad_pre(out);
    for (std::size_t i = 0; i < out; ++i) {
      grad_pre[i] = grad[i] * activate_grad(l.activation, pre_acts[k][i]);
    }
    for (std::size_t i = 0; i < out; ++i) {
      double* gw = g.weight.row(i);
      const double* a = activations[k].data();
      for (std::size_t j = 0; j < in; ++j) gw[j] = grad_pre[i] * a[j];
      g.bias[i] = grad_pre[i];
    }
    std::vector<double> grad_in(in, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
      const double* w = l.weight.row(i);
      for (std::size_t j = 0; j < in; ++j) grad_in[j] += w[j] * grad_pre[i];
    }
    grad.swap(grad_in);
  }
  result.input_grad = std::move(grad);
  return result;
}

}  // namespace awopt::nn
