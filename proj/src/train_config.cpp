#include "higan/train_config.hpp"

#include <string>

#include "higan/errors.hpp"

namespace higan {

void validate(const TrainConfig& cfg) {
  if (cfg.lambda1 < 0 || cfg.lambda2 < 0 || cfg.lambda3 < 0 || cfg.lambda4 < 0)
    throw BadSpec("config: loss weights must be nonnegative");
  if (!(cfg.lr_low > 0) || !(cfg.lr_high > 0))
    throw BadSpec("config: learning rates must be positive");
  if (cfg.batch_size < 2)
    throw BadSpec("config: batch size must be at least 2, got " +
                  std::to_string(cfg.batch_size));
  if (cfg.classifier_iterations < 1)
    throw BadSpec("config: classifier iteration cap must be positive");
  if (cfg.classifier_tolerance < 0)
    throw BadSpec("config: classifier tolerance must be nonnegative");
}

}  // namespace higan
