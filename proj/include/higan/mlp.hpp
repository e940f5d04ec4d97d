#pragma once

#include <cstdint>
#include <vector>

#include "higan/matrix.hpp"

namespace higan {

enum class Activation { rectifier, linear };

struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation activation = Activation::rectifier;

  bool operator==(const LayerSpec&) const = default;
};

struct Layer {
  Matrix weights;            // out_dim x in_dim
  std::vector<double> bias;  // out_dim
  Activation activation = Activation::linear;

  bool operator==(const Layer&) const = default;
};

/// Feed-forward network of affine layers with per-layer activation.
struct MlpNetwork {
  std::vector<Layer> layers;
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weights.cols(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().weights.rows(); }
  std::size_t parameter_count() const;
  std::vector<LayerSpec> specs() const;

  bool operator==(const MlpNetwork&) const = default;
};

/// Per-layer pre-activations and activations cached by forward() for one
/// batch; backward() consumes it.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> pre;
  std::vector<Matrix> post;

  const Matrix& output() const { return post.back(); }
};

struct LayerGrads {
  Matrix weights;
  std::vector<double> bias;
};

struct NetworkGrads {
  std::vector<LayerGrads> layers;
  Matrix input;  // gradient of the loss with respect to the input batch
};

/// Weights drawn from a zero-mean normal with scale sqrt(2/in_dim), biases
/// zero; fully determined by the seed.
MlpNetwork init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed);

ForwardTrace forward(const MlpNetwork& net, const Matrix& x);

/// Exact analytic gradients of a scalar loss given dL/dY. The rectifier
/// subgradient at 0 is taken as 0.
NetworkGrads backward(const MlpNetwork& net, const ForwardTrace& trace,
                      const Matrix& output_grad);

}  // namespace higan
