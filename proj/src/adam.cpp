#include "higan/adam.hpp"

#include <cmath>
#include <string>

namespace higan {

namespace {

void update_span(double* param, const double* grad, double* m, double* v,
                 std::size_t count, const AdamParams& p, double m_corr, double v_corr) {
  for (std::size_t i = 0; i < count; ++i) {
    m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * grad[i];
    v[i] = p.beta2 * v[i] + (1.0 - p.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / m_corr;
    const double v_hat = v[i] / v_corr;
    param[i] -= p.lr * m_hat / (std::sqrt(v_hat) + p.epsilon);
  }
}

}  // namespace

AdamState make_adam_state(const MlpNetwork& net, AdamParams params) {
  AdamState state;
  state.params = params;
  state.m.reserve(net.layers.size());
  state.v.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    LayerGrads zero;
    zero.weights = Matrix(layer.weights.rows(), layer.weights.cols());
    zero.bias.assign(layer.bias.size(), 0.0);
    state.m.push_back(zero);
    state.v.push_back(std::move(zero));
  }
  return state;
}

void adam_step(MlpNetwork& net, const NetworkGrads& grads, AdamState& state) {
  const std::size_t depth = net.layers.size();
  if (grads.layers.size() != depth || state.m.size() != depth || state.v.size() != depth)
    throw ShapeMismatch("adam_step: layer counts disagree");
  for (std::size_t li = 0; li < depth; ++li) {
    if (!grads.layers[li].weights.same_shape(net.layers[li].weights) ||
        grads.layers[li].bias.size() != net.layers[li].bias.size() ||
        !state.m[li].weights.same_shape(net.layers[li].weights) ||
        state.m[li].bias.size() != net.layers[li].bias.size())
      throw ShapeMismatch("adam_step: layer " + std::to_string(li) + " shapes disagree");
  }

  state.step += 1;
  const AdamParams& p = state.params;
  const double m_corr = 1.0 - std::pow(p.beta1, static_cast<double>(state.step));
  const double v_corr = 1.0 - std::pow(p.beta2, static_cast<double>(state.step));

  for (std::size_t li = 0; li < depth; ++li) {
    Layer& layer = net.layers[li];
    update_span(layer.weights.data(), grads.layers[li].weights.data(),
                state.m[li].weights.data(), state.v[li].weights.data(),
                layer.weights.size(), p, m_corr, v_corr);
    update_span(layer.bias.data(), grads.layers[li].bias.data(),
                state.m[li].bias.data(), state.v[li].bias.data(),
                layer.bias.size(), p, m_corr, v_corr);
    ensure_finite(layer.weights, "adam_step: layer " + std::to_string(li) + " weights");
    for (double b : layer.bias)
      if (!std::isfinite(b))
        throw NonFiniteValue("adam_step: layer " + std::to_string(li) + " bias");
  }
}

}  // namespace higan
