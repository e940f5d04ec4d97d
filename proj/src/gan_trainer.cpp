#include "higan/gan_trainer.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "higan/adam.hpp"
#include "higan/losses.hpp"
#include "higan/rng.hpp"

namespace higan {

namespace {

void accumulate(NetworkGrads& into, const NetworkGrads& other) {
  for (std::size_t li = 0; li < into.layers.size(); ++li) {
    add_scaled(into.layers[li].weights, other.layers[li].weights, 1.0);
    for (std::size_t i = 0; i < into.layers[li].bias.size(); ++i)
      into.layers[li].bias[i] += other.layers[li].bias[i];
  }
}

void add_weight_grads(NetworkGrads& into, const std::vector<Matrix>& weight_grads) {
  for (std::size_t li = 0; li < into.layers.size(); ++li)
    add_scaled(into.layers[li].weights, weight_grads[li], 1.0);
}

void check_setup(const GanLevel& level, const Matrix& conditions, const Matrix& reals,
                 const TrainConfig& cfg) {
  validate(cfg);
  if (conditions.rows() != reals.rows())
    throw ShapeMismatch("train_gan: " + std::to_string(conditions.rows()) +
                        " conditions vs " + std::to_string(reals.rows()) + " reals");
  if (conditions.rows() == 0) throw EmptyDataset("train_gan: no training pairs");
  if (conditions.rows() < cfg.batch_size && cfg.iterations > 0)
    throw BadSpec("train_gan: batch size " + std::to_string(cfg.batch_size) +
                  " exceeds the " + std::to_string(conditions.rows()) + " available pairs");
  if (level.generator.input_dim() != conditions.cols())
    throw ShapeMismatch("train_gan: generator expects " +
                        std::to_string(level.generator.input_dim()) +
                        "-dim conditions, got " + std::to_string(conditions.cols()));
  if (level.generator.output_dim() != reals.cols())
    throw ShapeMismatch("train_gan: generator emits " +
                        std::to_string(level.generator.output_dim()) +
                        " dims but real samples have " + std::to_string(reals.cols()));
  if (level.discriminator.input_dim() != conditions.cols() + reals.cols())
    throw ShapeMismatch("train_gan: discriminator expects " +
                        std::to_string(level.discriminator.input_dim()) +
                        " inputs, condition+sample is " +
                        std::to_string(conditions.cols() + reals.cols()));
  if (level.discriminator.output_dim() != 1)
    throw BadSpec("train_gan: discriminator must emit a single score");
}

}  // namespace

void TrainReport::write_csv(std::ostream& out) const {
  out << "iter,d_loss,g_adv,coral,reg,total\n";
  out.precision(17);
  for (const TrainRecord& rec : records)
    out << rec.iteration << ',' << rec.d_loss << ',' << rec.g_adv << ',' << rec.coral
        << ',' << rec.reg << ',' << rec.total << '\n';
}

std::uint64_t pairing_seed(std::uint64_t seed, LevelTag tag) {
  return mix_seed(seed, tag == LevelTag::low ? 1 : 2);
}

std::pair<GanLevel, TrainReport> train_gan(GanLevel level, const Matrix& conditions,
                                           const Matrix& reals, const TrainConfig& cfg) {
  check_setup(level, conditions, reals, cfg);

  // Record the effective generator-term weights on the returned level.
  const CombinedObjective weights = combined_objective(level.tag, 0.0, 0.0, 0.0, cfg);
  level.adv_weight = weights.adv_weight;
  level.coral_weight = weights.coral_weight;

  TrainReport report;
  if (cfg.iterations == 0) return {std::move(level), std::move(report)};
  report.records.reserve(cfg.iterations);

  const double lr = level.tag == LevelTag::low ? cfg.lr_low : cfg.lr_high;
  AdamParams adam;
  adam.lr = lr;
  AdamState d_state = make_adam_state(level.discriminator, adam);
  AdamState g_state = make_adam_state(level.generator, adam);

  const std::size_t n = conditions.rows();
  const std::size_t d_cond = conditions.cols();
  const std::size_t d_sample = reals.cols();

  Rng batch_rng(pairing_seed(cfg.seed, level.tag));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, batch_rng);
  std::size_t cursor = 0;

  for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
    if (n - cursor < 2) {
      shuffle(order, batch_rng);
      cursor = 0;
    }
    const std::size_t take = std::min(cfg.batch_size, n - cursor);
    const std::vector<std::size_t> batch(order.begin() + cursor,
                                         order.begin() + cursor + take);
    cursor += take;

    const Matrix cond_batch = gather_rows(conditions, batch);
    const Matrix real_batch = gather_rows(reals, batch);

    // Discriminator step; the generator stays frozen.
    const ForwardTrace gen_trace = forward(level.generator, cond_batch);
    const Matrix& fake_batch = gen_trace.output();

    const ForwardTrace d_real_trace =
        forward(level.discriminator, hconcat(cond_batch, real_batch));
    const ForwardTrace d_fake_trace =
        forward(level.discriminator, hconcat(cond_batch, fake_batch));
    const DiscriminatorLoss d_loss =
        lsgan_d_loss(d_real_trace.output(), d_fake_trace.output());
    if (!std::isfinite(d_loss.value))
      throw NonFiniteLoss("train_gan: discriminator loss is non-finite at iteration " +
                          std::to_string(iter));
    const RegLoss d_reg = reg_loss({&level.discriminator});

    NetworkGrads d_grads = backward(level.discriminator, d_real_trace, d_loss.real_grad);
    accumulate(d_grads, backward(level.discriminator, d_fake_trace, d_loss.fake_grad));
    add_weight_grads(d_grads, d_reg.weight_grads[0]);
    adam_step(level.discriminator, d_grads, d_state);

    // Generator step against the updated discriminator; the generator has
    // not moved since gen_trace, so the cached forward pass is still valid.
    const ForwardTrace d_adv_trace =
        forward(level.discriminator, hconcat(cond_batch, fake_batch));
    const GeneratorLoss g_adv = lsgan_g_loss(d_adv_trace.output());
    const CoralLoss coral = coral_loss(real_batch, fake_batch);
    const RegLoss g_reg = reg_loss({&level.generator});
    const CombinedObjective total =
        combined_objective(level.tag, g_adv.value, coral.value, g_reg.value, cfg);
    if (!std::isfinite(total.value) || !std::isfinite(g_adv.value) ||
        !std::isfinite(coral.value) || !std::isfinite(g_reg.value))
      throw NonFiniteLoss("train_gan: generator objective is non-finite at iteration " +
                          std::to_string(iter));

    const NetworkGrads d_input_grads =
        backward(level.discriminator, d_adv_trace, g_adv.fake_grad);
    Matrix fake_grad = column_slice(d_input_grads.input, d_cond, d_cond + d_sample);
    for (double& v : fake_grad) v *= total.adv_weight;
    add_scaled(fake_grad, coral.generated_grad, total.coral_weight);

    NetworkGrads g_grads = backward(level.generator, gen_trace, fake_grad);
    add_weight_grads(g_grads, g_reg.weight_grads[0]);
    adam_step(level.generator, g_grads, g_state);

    TrainRecord rec;
    rec.iteration = iter;
    rec.d_loss = d_loss.value;
    rec.g_adv = g_adv.value;
    rec.coral = coral.value;
    rec.reg = g_reg.value;
    rec.total = total.value;
    report.records.push_back(rec);
  }

  return {std::move(level), std::move(report)};
}

Matrix generate(const GanLevel& level, const Matrix& conditions) {
  return forward(level.generator, conditions).output();
}

}  // namespace higan
