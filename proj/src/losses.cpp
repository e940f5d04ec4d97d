#include "higan/losses.hpp"

#include <string>

namespace higan {

namespace {

// dL/dX for L = ||cov(X) - other||_F^2 / (4 d^2), given diff = cov_x - cov_other
// (symmetric). Chain rule through the centered covariance gives
// centered(X) * diff / (d^2 (n-1)), with `sign` flipping the generated side.
Matrix coral_side_grad(const Matrix& x, const Matrix& diff, double sign) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::vector<double> means = column_means(x);
  Matrix centered(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) centered(r, c) = x(r, c) - means[c];
  Matrix grad = matmul(centered, diff);
  const double factor = sign / (static_cast<double>(d) * static_cast<double>(d) *
                                static_cast<double>(n - 1));
  for (double& v : grad) v *= factor;
  return grad;
}

}  // namespace

CoralLoss coral_loss(const Matrix& real, const Matrix& generated) {
  if (real.cols() != generated.cols())
    throw ShapeMismatch("coral_loss: feature dims differ, " + std::to_string(real.cols()) +
                        " vs " + std::to_string(generated.cols()));
  if (real.rows() < 2 || generated.rows() < 2)
    throw DegenerateSample("coral_loss: both sides need at least 2 rows");

  const std::size_t d = real.cols();
  const Matrix diff = sub(covariance(real), covariance(generated));

  double sq = 0.0;
  for (double v : diff) sq += v * v;

  CoralLoss out;
  out.value = sq / (4.0 * static_cast<double>(d) * static_cast<double>(d));
  out.real_grad = coral_side_grad(real, diff, 1.0);
  out.generated_grad = coral_side_grad(generated, diff, -1.0);
  return out;
}

DiscriminatorLoss lsgan_d_loss(const Matrix& d_real, const Matrix& d_fake) {
  if (d_real.cols() != 1 || d_fake.cols() != 1)
    throw ShapeMismatch("lsgan_d_loss: discriminator outputs must be column vectors");
  if (d_real.rows() == 0 || d_fake.rows() == 0)
    throw EmptyBatch("lsgan_d_loss: empty batch");

  const double n_real = static_cast<double>(d_real.rows());
  const double n_fake = static_cast<double>(d_fake.rows());

  DiscriminatorLoss out;
  out.real_grad = Matrix(d_real.rows(), 1);
  out.fake_grad = Matrix(d_fake.rows(), 1);
  double sum = 0.0;
  for (std::size_t r = 0; r < d_real.rows(); ++r) {
    const double e = d_real(r, 0) - 1.0;
    sum += 0.5 * e * e / n_real;
    out.real_grad(r, 0) = e / n_real;
  }
  for (std::size_t r = 0; r < d_fake.rows(); ++r) {
    const double v = d_fake(r, 0);
    sum += 0.5 * v * v / n_fake;
    out.fake_grad(r, 0) = v / n_fake;
  }
  out.value = sum;
  return out;
}

GeneratorLoss lsgan_g_loss(const Matrix& d_fake) {
  if (d_fake.cols() != 1)
    throw ShapeMismatch("lsgan_g_loss: discriminator outputs must be a column vector");
  if (d_fake.rows() == 0) throw EmptyBatch("lsgan_g_loss: empty batch");

  const double n = static_cast<double>(d_fake.rows());
  GeneratorLoss out;
  out.fake_grad = Matrix(d_fake.rows(), 1);
  double sum = 0.0;
  for (std::size_t r = 0; r < d_fake.rows(); ++r) {
    const double e = d_fake(r, 0) - 1.0;
    sum += 0.5 * e * e / n;
    out.fake_grad(r, 0) = e / n;
  }
  out.value = sum;
  return out;
}

RegLoss reg_loss(const std::vector<const MlpNetwork*>& nets) {
  RegLoss out;
  out.weight_grads.reserve(nets.size());
  for (const MlpNetwork* net : nets) {
    std::vector<Matrix> grads;
    grads.reserve(net->layers.size());
    for (const Layer& layer : net->layers) {
      const double norm = frobenius_norm(layer.weights);
      out.value += norm;
      if (norm == 0.0)
        grads.push_back(Matrix(layer.weights.rows(), layer.weights.cols()));
      else
        grads.push_back(scale(layer.weights, 1.0 / norm));
    }
    out.weight_grads.push_back(std::move(grads));
  }
  return out;
}

CombinedObjective combined_objective(LevelTag level, double adv, double coral,
                                     double reg, const TrainConfig& cfg) {
  CombinedObjective out;
  out.adv_weight = level == LevelTag::low ? cfg.lambda1 : cfg.lambda3;
  out.coral_weight = level == LevelTag::low ? cfg.lambda2 : cfg.lambda4;
  if (cfg.ablation == Ablation::coral_only) out.adv_weight = 0.0;
  if (cfg.ablation == Ablation::adversarial_only) out.coral_weight = 0.0;
  out.value = out.adv_weight * adv + out.coral_weight * coral + reg;
  return out;
}

}  // namespace higan
