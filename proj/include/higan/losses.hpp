#pragma once

#include <vector>

#include "higan/matrix.hpp"
#include "higan/mlp.hpp"
#include "higan/train_config.hpp"

namespace higan {

/// Squared Frobenius distance between the covariance matrices of two
/// row-sample batches, scaled by 1/(4 d^2). Gradients are returned for both
/// sides; training only feeds the generated-side gradient back.
struct CoralLoss {
  double value = 0.0;
  Matrix real_grad;
  Matrix generated_grad;
};
CoralLoss coral_loss(const Matrix& real, const Matrix& generated);

/// Least-squares discriminator objective with 0/1 coding:
/// mean((d_real - 1)^2)/2 + mean(d_fake^2)/2.
struct DiscriminatorLoss {
  double value = 0.0;
  Matrix real_grad;
  Matrix fake_grad;
};
DiscriminatorLoss lsgan_d_loss(const Matrix& d_real, const Matrix& d_fake);

/// Least-squares generator objective: mean((d_fake - 1)^2)/2.
struct GeneratorLoss {
  double value = 0.0;
  Matrix fake_grad;
};
GeneratorLoss lsgan_g_loss(const Matrix& d_fake);

/// Sum of unsquared Frobenius norms of every layer's weight matrix across
/// the given networks; biases excluded. The gradient of each layer is
/// W/||W||_F, defined as zero when the layer is all zeros.
struct RegLoss {
  double value = 0.0;
  std::vector<std::vector<Matrix>> weight_grads;  // [network][layer]
};
RegLoss reg_loss(const std::vector<const MlpNetwork*>& nets);

/// Weighted total objective for one level:
///   adv_weight * adv + coral_weight * coral + reg
/// with the weights taken from cfg by level and zeroed by the ablation
/// switch. Gradients combine with the same coefficients.
struct CombinedObjective {
  double value = 0.0;
  double adv_weight = 0.0;
  double coral_weight = 0.0;
};
CombinedObjective combined_objective(LevelTag level, double adv, double coral,
                                     double reg, const TrainConfig& cfg);

}  // namespace higan
