#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "higan/matrix.hpp"
#include "higan/mlp.hpp"
#include "higan/train_config.hpp"

namespace higan {

/// One conditional GAN. The generator maps a condition row to a sample row;
/// the discriminator scores condition and sample concatenated along the
/// feature axis. adv_weight/coral_weight record the effective generator-side
/// term weights the level was (or would be) trained with.
struct GanLevel {
  MlpNetwork generator;
  MlpNetwork discriminator;
  LevelTag tag = LevelTag::low;
  double adv_weight = 1.0;
  double coral_weight = 100.0;
};

struct TrainRecord {
  std::size_t iteration = 0;
  double d_loss = 0.0;
  double g_adv = 0.0;
  double coral = 0.0;
  double reg = 0.0;
  double total = 0.0;
};

struct TrainReport {
  std::vector<TrainRecord> records;

  /// CSV with header `iter,d_loss,g_adv,coral,reg,total`.
  void write_csv(std::ostream& out) const;
};

/// Seed stream for the minibatch schedule; exposed so tests can reproduce
/// the exact batch order.
std::uint64_t pairing_seed(std::uint64_t seed, LevelTag tag);

/// Alternating least-squares GAN training over row-aligned
/// (condition, real) pairs. Each iteration runs one discriminator step
/// (unweighted adversarial loss plus the discriminator's regularizer,
/// generator frozen) and one generator step (adv_weight * adversarial +
/// coral_weight * correlation + the generator's regularizer, discriminator
/// frozen). Minibatches are drawn without replacement per epoch and
/// reshuffled each epoch; a leftover batch of fewer than 2 rows is dropped.
std::pair<GanLevel, TrainReport> train_gan(GanLevel level, const Matrix& conditions,
                                           const Matrix& reals, const TrainConfig& cfg);

/// Deterministic generator forward pass; row i of the output corresponds to
/// row i of conditions.
Matrix generate(const GanLevel& level, const Matrix& conditions);

}  // namespace higan
