#pragma once

#include <cstdint>

#include "higan/mlp.hpp"

namespace higan {

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First and second moment estimates mirroring the network's parameter
/// shapes, plus the step counter used for bias correction.
struct AdamState {
  AdamParams params;
  std::vector<LayerGrads> m;
  std::vector<LayerGrads> v;
  std::uint64_t step = 0;
};

AdamState make_adam_state(const MlpNetwork& net, AdamParams params);

/// One bias-corrected update in place. Throws ShapeMismatch if grads or
/// state do not mirror the network, NonFiniteValue if a parameter leaves
/// the finite range.
void adam_step(MlpNetwork& net, const NetworkGrads& grads, AdamState& state);

}  // namespace higan
