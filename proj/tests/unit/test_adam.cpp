#include <doctest.h>

#include <cmath>

#include "higan/adam.hpp"
#include "higan/rng.hpp"
#include "higan/train_config.hpp"
#include "test_util.hpp"

using namespace higan;
using test::random_matrix;

namespace {

MlpNetwork scalar_net(double w) {
  MlpNetwork net;
  net.layers.push_back({Matrix::from_rows({{w}}), {0.0}, Activation::linear});
  return net;
}

NetworkGrads scalar_grads(double g) {
  NetworkGrads grads;
  grads.layers.push_back({Matrix::from_rows({{g}}), {0.0}});
  return grads;
}

}  // namespace

TEST_CASE("zero gradient on a fresh state leaves parameters unchanged") {
  Rng rng(1);
  MlpNetwork net = init_network({{3, 4, Activation::rectifier}, {4, 2, Activation::linear}},
                                77);
  const MlpNetwork before = net;
  AdamState state = make_adam_state(net, {.lr = 0.1});

  NetworkGrads grads;
  for (const Layer& layer : net.layers)
    grads.layers.push_back({Matrix(layer.weights.rows(), layer.weights.cols()),
                            std::vector<double>(layer.bias.size(), 0.0)});
  adam_step(net, grads, state);
  CHECK(net == before);
  CHECK(state.step == 1);
}

TEST_CASE("first step moves by about -lr times the gradient sign") {
  const double lr = 0.01;
  for (double g : {2.5, -0.3, 1e-3}) {
    MlpNetwork net = scalar_net(1.0);
    AdamState state = make_adam_state(net, {.lr = lr});
    adam_step(net, scalar_grads(g), state);
    const double update = net.layers[0].weights(0, 0) - 1.0;
    const double expected = -lr * (g > 0 ? 1.0 : -1.0);
    CHECK(std::abs(update - expected) <= lr * (state.params.epsilon / std::abs(g)) + 1e-15);
  }
}

TEST_CASE("constant gradient settles to -lr per step") {
  const double lr = 1e-3;
  const double g = 0.37;
  MlpNetwork net = scalar_net(0.0);
  AdamState state = make_adam_state(net, {.lr = lr});
  const NetworkGrads grads = scalar_grads(g);
  double previous = 0.0;
  double step_change = 0.0;
  for (int it = 0; it < 1200; ++it) {
    previous = net.layers[0].weights(0, 0);
    adam_step(net, grads, state);
    step_change = net.layers[0].weights(0, 0) - previous;
  }
  CHECK(std::abs(step_change + lr) <= 0.01 * lr);
}

TEST_CASE("update is elementwise: permuting layout permutes updates") {
  const std::vector<double> weights{0.4, -1.2, 3.3, 0.05};
  const std::vector<double> grads_v{1.0, -2.0, 0.5, 4.0};
  const std::vector<std::size_t> perm{2, 0, 3, 1};

  MlpNetwork net;
  Matrix w(1, 4);
  for (std::size_t i = 0; i < 4; ++i) w(0, i) = weights[i];
  net.layers.push_back({w, {0.0}, Activation::linear});

  MlpNetwork permuted;
  Matrix wp(1, 4);
  for (std::size_t i = 0; i < 4; ++i) wp(0, i) = weights[perm[i]];
  permuted.layers.push_back({wp, {0.0}, Activation::linear});

  NetworkGrads g;
  Matrix gw(1, 4);
  for (std::size_t i = 0; i < 4; ++i) gw(0, i) = grads_v[i];
  g.layers.push_back({gw, {0.0}});

  NetworkGrads gp;
  Matrix gwp(1, 4);
  for (std::size_t i = 0; i < 4; ++i) gwp(0, i) = grads_v[perm[i]];
  gp.layers.push_back({gwp, {0.0}});

  AdamState state = make_adam_state(net, {.lr = 0.05});
  AdamState state_p = make_adam_state(permuted, {.lr = 0.05});
  for (int it = 0; it < 5; ++it) {
    adam_step(net, g, state);
    adam_step(permuted, gp, state_p);
  }
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(permuted.layers[0].weights(0, i) == net.layers[0].weights(0, perm[i]));
}

TEST_CASE("adam is deterministic") {
  Rng rng(3);
  MlpNetwork a = init_network({{4, 3, Activation::linear}}, 5);
  MlpNetwork b = a;
  NetworkGrads grads;
  grads.layers.push_back({random_matrix(3, 4, rng), {0.1, -0.2, 0.3}});
  AdamState state_a = make_adam_state(a, {.lr = 2e-5});
  AdamState state_b = make_adam_state(b, {.lr = 2e-5});
  for (int it = 0; it < 3; ++it) {
    adam_step(a, grads, state_a);
    adam_step(b, grads, state_b);
  }
  CHECK(a == b);
  CHECK(state_a.step == state_b.step);
}

TEST_CASE("adam rejects mismatched gradient shapes") {
  MlpNetwork net = init_network({{4, 3, Activation::linear}}, 5);
  AdamState state = make_adam_state(net, {.lr = 1e-3});
  NetworkGrads wrong;
  wrong.layers.push_back({Matrix(3, 5), std::vector<double>(3, 0.0)});
  CHECK_THROWS_AS(adam_step(net, wrong, state), ShapeMismatch);
}

TEST_CASE("default hyperparameters") {
  const AdamParams params;
  CHECK(params.beta1 == 0.9);
  CHECK(params.beta2 == 0.999);
  CHECK(params.epsilon == 1e-8);

  const TrainConfig cfg;
  CHECK(cfg.lr_low == 2e-5);
  CHECK(cfg.lr_high == 8e-6);
  CHECK(cfg.batch_size == 64);
}
