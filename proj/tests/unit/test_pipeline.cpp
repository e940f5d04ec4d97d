#include <doctest.h>

#include <cmath>

#include "higan/data_io.hpp"
#include "higan/pipeline.hpp"
#include "higan/rng.hpp"
#include "test_util.hpp"

using namespace higan;
using test::random_matrix;

namespace {

SynthSpec small_spec(std::uint64_t seed) {
  SynthSpec spec;
  spec.videos_per_class = 5;
  spec.clips_min = 2;
  spec.clips_max = 4;
  spec.images_per_class = 10;
  spec.seed = seed;
  return spec;
}

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.iterations = 40;
  cfg.batch_size = 8;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("clip index validates the partition") {
  CHECK_NOTHROW(ClipIndex({0, 0, 1, 2, 2}));
  CHECK_THROWS_AS(ClipIndex({0, 2, 2}), InvalidClipIndex);
  const ClipIndex idx({1, 0, 1});
  CHECK(idx.video_count() == 2);
}

TEST_CASE("average_clips hand values") {
  const ClipIndex one_each({0, 1, 2});
  Rng rng(1);
  const Matrix rows = random_matrix(3, 4, rng);
  CHECK(average_clips(rows, one_each) == rows);

  const ClipIndex pair({0, 0});
  const Matrix clips = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK(average_clips(clips, pair) == Matrix::from_rows({{2, 3}}));
}

TEST_CASE("average_clips ignores clip order within a video") {
  const Matrix clips = Matrix::from_rows({{1, 2}, {3, 4}, {10, 20}});
  const Matrix swapped = Matrix::from_rows({{3, 4}, {1, 2}, {10, 20}});
  const ClipIndex idx({0, 0, 1});
  const Matrix a = average_clips(clips, idx);
  const Matrix b = average_clips(swapped, idx);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a.data()[i] - b.data()[i]) <= 1e-12);
}

TEST_CASE("average_clips commutes with row-wise linear maps") {
  Rng rng(2);
  const Matrix clips = random_matrix(11, 3, rng);
  const ClipIndex idx({0, 0, 0, 1, 1, 2, 2, 2, 2, 3, 3});
  const Matrix map = random_matrix(5, 3, rng);

  const Matrix mapped_then_avg = average_clips(matmul_nt(clips, map), idx);
  const Matrix avg_then_mapped = matmul_nt(average_clips(clips, idx), map);
  REQUIRE(mapped_then_avg.same_shape(avg_then_mapped));
  for (std::size_t i = 0; i < mapped_then_avg.size(); ++i)
    CHECK(std::abs(mapped_then_avg.data()[i] - avg_then_mapped.data()[i]) <= 1e-12);
}

TEST_CASE("average_clips rejects a mismatched index") {
  CHECK_THROWS_AS(average_clips(Matrix(4, 2), ClipIndex({0, 0, 1})), InvalidClipIndex);
}

TEST_CASE("generator and discriminator layouts reproduce the published shapes") {
  const auto g_low = generator_arch(2048, 512);
  const std::vector<LayerSpec> g_low_expected{{2048, 1024, Activation::rectifier},
                                              {1024, 1024, Activation::rectifier},
                                              {1024, 1024, Activation::rectifier},
                                              {1024, 512, Activation::linear}};
  CHECK(g_low == g_low_expected);

  const auto g_high = generator_arch(512, 2048);
  const std::vector<LayerSpec> g_high_expected{{512, 1024, Activation::rectifier},
                                               {1024, 1024, Activation::rectifier},
                                               {1024, 2048, Activation::rectifier},
                                               {2048, 2048, Activation::linear}};
  CHECK(g_high == g_high_expected);

  const std::vector<LayerSpec> d_expected{{2560, 1280, Activation::rectifier},
                                          {1280, 640, Activation::rectifier},
                                          {640, 1, Activation::linear}};
  CHECK(discriminator_arch(2048, 512) == d_expected);
  CHECK(discriminator_arch(512, 2048) == d_expected);
}

TEST_CASE("published generator output widths") {
  GanLevel low;
  low.generator = init_network(generator_arch(2048, 512), 1);
  Rng rng(3);
  CHECK(generate(low, random_matrix(3, 2048, rng, 0.1)).cols() == 512);

  GanLevel high;
  high.generator = init_network(generator_arch(512, 2048), 2);
  CHECK(generate(high, random_matrix(3, 512, rng, 0.1)).cols() == 2048);
}

TEST_CASE("evaluate_transfer basics") {
  // Separable two-class blobs.
  Rng rng(4);
  Matrix source(40, 3);
  std::vector<int> labels(40);
  for (std::size_t r = 0; r < 40; ++r) {
    const int cls = r < 20 ? 0 : 1;
    labels[r] = cls;
    for (std::size_t c = 0; c < 3; ++c)
      source(r, c) = rng.normal() * 0.2 + (cls == 0 ? 2.0 : -2.0);
  }
  TrainConfig cfg;

  SUBCASE("train equals test gives perfect accuracy") {
    CHECK(evaluate_transfer(source, labels, source, labels, cfg) == 1.0);
  }

  SUBCASE("single-class dataset is always right") {
    Matrix mono(6, 3, 0.5);
    const std::vector<int> zero_labels(6, 0);
    CHECK(evaluate_transfer(mono, zero_labels, mono, zero_labels, cfg) == 1.0);
  }

  SUBCASE("relabeling both sides consistently preserves accuracy") {
    const double base = evaluate_transfer(source, labels, source, labels, cfg);
    std::vector<int> flipped(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) flipped[i] = 1 - labels[i];
    CHECK(evaluate_transfer(source, flipped, source, flipped, cfg) == base);
  }

  SUBCASE("unseen target class is rejected") {
    std::vector<int> bad = labels;
    bad[0] = 7;
    CHECK_THROWS_AS(evaluate_transfer(source, labels, source, bad, cfg), ClassMismatch);
  }

  SUBCASE("mismatched widths are rejected") {
    CHECK_THROWS_AS(evaluate_transfer(source, labels, Matrix(4, 2), {0, 0, 0, 0}, cfg),
                    ShapeMismatch);
  }

  SUBCASE("deterministic") {
    CHECK(evaluate_transfer(source, labels, source, labels, cfg) ==
          evaluate_transfer(source, labels, source, labels, cfg));
  }
}

TEST_CASE("zero maps compose to a zero target matrix") {
  // Zero-initialized generators passed through an iteration-free training
  // call, then the projection and averaging stages.
  const DomainBundle bundle = synthesize(small_spec(6));
  TrainConfig cfg = quick_config();
  cfg.iterations = 0;

  GanLevel low;
  low.tag = LevelTag::low;
  low.generator = init_network(
      generator_arch(bundle.frame_feats.cols(), bundle.clip_feats.cols()), 1);
  low.discriminator = init_network(
      discriminator_arch(bundle.frame_feats.cols(), bundle.clip_feats.cols()), 2);
  for (Layer& layer : low.generator.layers)
    for (double& w : layer.weights) w = 0.0;

  auto [trained_low, low_report] =
      train_gan(low, bundle.frame_feats, bundle.clip_feats, cfg);
  CHECK(trained_low.generator == low.generator);

  GanLevel high;
  high.tag = LevelTag::high;
  high.generator = init_network(
      generator_arch(bundle.clip_feats.cols(), bundle.frame_shared_feats.cols()), 3);
  high.discriminator = init_network(
      discriminator_arch(bundle.clip_feats.cols(), bundle.frame_shared_feats.cols()), 4);
  for (Layer& layer : high.generator.layers)
    for (double& w : layer.weights) w = 0.0;

  const Matrix projected = generate(high, bundle.clip_feats);
  const Matrix target = average_clips(projected, bundle.clip_index);
  CHECK(target.rows() == bundle.clip_index.video_count());
  CHECK(target.cols() == bundle.frame_shared_feats.cols());
  for (double v : target) CHECK(v == 0.0);
}

TEST_CASE("pipeline emits the full shape chain and is deterministic") {
  const DomainBundle bundle = synthesize(small_spec(7));
  const TrainConfig cfg = quick_config();

  const PipelineResult a = run_pipeline(bundle, cfg);
  const PipelineResult b = run_pipeline(bundle, cfg);

  CHECK(a.target_feats.rows() == bundle.clip_index.video_count());
  CHECK(a.target_feats.cols() == bundle.frame_shared_feats.cols());
  CHECK(a.target_feats == b.target_feats);
  CHECK(a.low.generator == b.low.generator);
  CHECK(a.high.generator == b.high.generator);
  REQUIRE(a.accuracy.has_value());
  CHECK(*a.accuracy == *b.accuracy);
  REQUIRE(a.baseline_accuracy.has_value());

  // Recomputable intermediates keep the documented shapes.
  const Matrix generated_clips = generate(a.low, bundle.frame_feats);
  CHECK(generated_clips.rows() == bundle.frame_feats.rows());
  CHECK(generated_clips.cols() == bundle.clip_feats.cols());
  const Matrix projected = generate(a.high, bundle.clip_feats);
  CHECK(projected.rows() == bundle.clip_feats.rows());
  CHECK(projected.cols() == bundle.frame_shared_feats.cols());

  // The reports cover every iteration with finite values.
  CHECK(a.low_report.records.size() == cfg.iterations);
  CHECK(a.high_report.records.size() == cfg.iterations);
}

TEST_CASE("ablation full is bit-identical to the plain pipeline") {
  const DomainBundle bundle = synthesize(small_spec(8));
  const TrainConfig cfg = quick_config();
  const PipelineResult plain = run_pipeline(bundle, cfg);
  const PipelineResult full = run_ablation(bundle, cfg, Ablation::full);
  CHECK(plain.target_feats == full.target_feats);
  CHECK(plain.low.generator == full.low.generator);
  CHECK(plain.high.discriminator == full.high.discriminator);
}

TEST_CASE("ablation variants zero the corresponding weights") {
  const DomainBundle bundle = synthesize(small_spec(9));
  const TrainConfig cfg = quick_config();

  const PipelineResult coral_only = run_ablation(bundle, cfg, Ablation::coral_only);
  CHECK(coral_only.low.adv_weight == 0.0);
  CHECK(coral_only.high.adv_weight == 0.0);
  CHECK(coral_only.low.coral_weight == cfg.lambda2);
  for (const TrainRecord& rec : coral_only.low_report.records)
    CHECK(rec.total == cfg.lambda2 * rec.coral + rec.reg);

  const PipelineResult adv_only = run_ablation(bundle, cfg, Ablation::adversarial_only);
  CHECK(adv_only.low.coral_weight == 0.0);
  CHECK(adv_only.high.coral_weight == 0.0);
  for (const TrainRecord& rec : adv_only.high_report.records)
    CHECK(rec.total == cfg.lambda3 * rec.g_adv + rec.reg);
}

TEST_CASE("bundle validation catches structural problems") {
  DomainBundle bundle = synthesize(small_spec(10));
  CHECK_NOTHROW(validate(bundle));

  DomainBundle bad = bundle;
  bad.frame_feats = Matrix(bundle.frame_feats.rows() + 1, bundle.frame_feats.cols());
  CHECK_THROWS_AS(validate(bad), ShapeMismatch);

  bad = bundle;
  bad.source_labels[0] = 17;  // class 17 exists, classes 3..16 have no rows
  CHECK_THROWS_AS(validate(bad), ClassMismatch);

  bad = bundle;
  bad.video_labels->pop_back();
  CHECK_THROWS_AS(validate(bad), ShapeMismatch);
}
