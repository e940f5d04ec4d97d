#pragma once

#include <cstddef>
#include <cstdint>

namespace higan {

enum class LevelTag { low, high };
enum class Ablation { full, coral_only, adversarial_only };

/// Shared training knobs. lambda1/lambda2 weight the low-level adversarial
/// and correlation terms, lambda3/lambda4 the high-level ones; the
/// regularizer always enters with weight 1.
struct TrainConfig {
  double lambda1 = 1.0;
  double lambda2 = 100.0;
  double lambda3 = 1.0;
  double lambda4 = 100.0;
  double lr_low = 2e-5;
  double lr_high = 8e-6;
  std::size_t batch_size = 64;
  std::size_t iterations = 20000;
  std::uint64_t seed = 0;
  Ablation ablation = Ablation::full;
  std::size_t classifier_iterations = 2000;
  double classifier_tolerance = 1e-7;
};

/// Throws BadSpec when a field violates its invariant.
void validate(const TrainConfig& cfg);

}  // namespace higan
