#include "higan/mlp.hpp"

#include <cmath>
#include <string>

#include "higan/rng.hpp"

namespace higan {

std::size_t MlpNetwork::parameter_count() const {
  std::size_t count = 0;
  for (const Layer& layer : layers) count += layer.weights.size() + layer.bias.size();
  return count;
}

std::vector<LayerSpec> MlpNetwork::specs() const {
  std::vector<LayerSpec> out;
  out.reserve(layers.size());
  for (const Layer& layer : layers)
    out.push_back({layer.weights.cols(), layer.weights.rows(), layer.activation});
  return out;
}

MlpNetwork init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
  if (specs.empty()) throw BadSpec("init_network: no layers");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].in_dim < 1 || specs[i].out_dim < 1)
      throw BadSpec("init_network: layer " + std::to_string(i) + " has a zero dimension");
    if (i > 0 && specs[i].in_dim != specs[i - 1].out_dim)
      throw BadSpec("init_network: layer " + std::to_string(i) + " expects " +
                    std::to_string(specs[i].in_dim) + " inputs but the previous layer emits " +
                    std::to_string(specs[i - 1].out_dim));
  }

  Rng rng(seed);
  MlpNetwork net;
  net.seed = seed;
  net.layers.reserve(specs.size());
  for (const LayerSpec& spec : specs) {
    Layer layer;
    layer.activation = spec.activation;
    layer.weights = Matrix(spec.out_dim, spec.in_dim);
    const double stddev = std::sqrt(2.0 / static_cast<double>(spec.in_dim));
    for (double& w : layer.weights) w = rng.normal() * stddev;
    layer.bias.assign(spec.out_dim, 0.0);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

ForwardTrace forward(const MlpNetwork& net, const Matrix& x) {
  if (net.layers.empty()) throw BadSpec("forward: empty network");
  if (x.cols() != net.input_dim())
    throw ShapeMismatch("forward: input has " + std::to_string(x.cols()) +
                        " columns, network expects " + std::to_string(net.input_dim()));

  ForwardTrace trace;
  trace.input = x;
  trace.pre.reserve(net.layers.size());
  trace.post.reserve(net.layers.size());

  const Matrix* current = &trace.input;
  for (const Layer& layer : net.layers) {
    Matrix pre = matmul_nt(*current, layer.weights);
    for (std::size_t r = 0; r < pre.rows(); ++r)
      for (std::size_t c = 0; c < pre.cols(); ++c) pre(r, c) += layer.bias[c];

    Matrix post = pre;
    if (layer.activation == Activation::rectifier)
      for (double& v : post) v = v > 0.0 ? v : 0.0;

    trace.pre.push_back(std::move(pre));
    trace.post.push_back(std::move(post));
    current = &trace.post.back();
  }
  return trace;
}

NetworkGrads backward(const MlpNetwork& net, const ForwardTrace& trace,
                      const Matrix& output_grad) {
  const std::size_t depth = net.layers.size();
  if (trace.pre.size() != depth || trace.post.size() != depth)
    throw TraceMismatch("backward: trace depth " + std::to_string(trace.pre.size()) +
                        " does not match network depth " + std::to_string(depth));
  if (trace.input.cols() != net.input_dim())
    throw TraceMismatch("backward: trace input width does not match the network");
  for (std::size_t i = 0; i < depth; ++i) {
    if (trace.pre[i].rows() != trace.input.rows() ||
        trace.pre[i].cols() != net.layers[i].weights.rows())
      throw TraceMismatch("backward: trace layer " + std::to_string(i) + " has wrong shape");
  }
  if (!output_grad.same_shape(trace.post.back()))
    throw TraceMismatch("backward: output gradient shape does not match the trace");

  NetworkGrads grads;
  grads.layers.resize(depth);

  Matrix delta = output_grad;  // dL/d(activation of the current layer)
  for (std::size_t li = depth; li-- > 0;) {
    const Layer& layer = net.layers[li];
    if (layer.activation == Activation::rectifier) {
      const Matrix& pre = trace.pre[li];
      for (std::size_t i = 0; i < delta.size(); ++i)
        if (!(pre.data()[i] > 0.0)) delta.data()[i] = 0.0;
    }

    const Matrix& below = li == 0 ? trace.input : trace.post[li - 1];
    grads.layers[li].weights = matmul_tn(delta, below);
    grads.layers[li].bias.assign(layer.bias.size(), 0.0);
    for (std::size_t r = 0; r < delta.rows(); ++r)
      for (std::size_t c = 0; c < delta.cols(); ++c)
        grads.layers[li].bias[c] += delta(r, c);

    Matrix input_grad = matmul(delta, layer.weights);
    if (li == 0)
      grads.input = std::move(input_grad);
    else
      delta = std::move(input_grad);
  }
  return grads;
}

}  // namespace higan
