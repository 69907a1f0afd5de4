#include "awopt/checkpoint.hpp"

#include <cstdint>
#include <fstream>

#include "awopt/errors.hpp"

namespace awopt::nn {
namespace {

constexpr std::uint8_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw UsageError("checkpoint: truncated file");
  return value;
}

}  // namespace

void save_checkpoint(const MlpParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("checkpoint: cannot open " + path + " for writing");
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::uint32_t>(params.layers.size()));
  for (const Layer& l : params.layers) {
    write_pod(out, static_cast<std::uint32_t>(l.weight.rows()));
    write_pod(out, static_cast<std::uint32_t>(l.weight.cols()));
    write_pod(out, static_cast<std::uint8_t>(l.activation));
    out.write(reinterpret_cast<const char*>(l.weight.data()),
              static_cast<std::streamsize>(l.weight.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(l.bias.data()),
              static_cast<std::streamsize>(l.bias.size() * sizeof(double)));
  }
  if (!out) throw UsageError("checkpoint: write failed for " + path);
}

MlpParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("checkpoint: cannot open " + path);
  const auto version = read_pod<std::uint8_t>(in);
  if (version != kFormatVersion) {
    throw UsageError("checkpoint: unsupported format version " +
                     std::to_string(version));
  }
  const auto n_layers = read_pod<std::uint32_t>(in);
  MlpParams params;
  params.layers.reserve(n_layers);
  for (std::uint32_t k = 0; k < n_layers; ++k) {
    const auto rows = read_pod<std::uint32_t>(in);
    const auto cols = read_pod<std::uint32_t>(in);
    const auto act = read_pod<std::uint8_t>(in);
    if (act > static_cast<std::uint8_t>(Activation::kIdentity)) {
      throw UsageError("checkpoint: invalid activation code");
    }
    Layer layer;
    layer.weight = Matrix(rows, cols);
    layer.bias.assign(rows, 0.0);
    layer.activation = static_cast<Activation>(act);
    in.read(reinterpret_cast<char*>(layer.weight.data()),
            static_cast<std::streamsize>(layer.weight.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(layer.bias.data()),
            static_cast<std::streamsize>(layer.bias.size() * sizeof(double)));
    if (!in) throw UsageError("checkpoint: truncated file");
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

}  // namespace awopt::nn
