#include "higan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "higan/adam.hpp"
#include "higan/losses.hpp"
#include "higan/rng.hpp"

namespace higan {

namespace {

constexpr std::size_t kMinHidden = 32;
constexpr double kClassifierLearningRate = 0.05;

// Softmax cross-entropy over logits, mean over rows; returns dL/dlogits.
Matrix softmax_ce_grad(const Matrix& logits, const std::vector<int>& labels) {
  Matrix grad(logits.rows(), logits.cols());
  const double inv_n = 1.0 / static_cast<double>(logits.rows());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    double max_logit = logits(r, 0);
    for (std::size_t c = 1; c < logits.cols(); ++c)
      max_logit = std::max(max_logit, logits(r, c));
    double z = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) z += std::exp(logits(r, c) - max_logit);
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      const double p = std::exp(logits(r, c) - max_logit) / z;
      grad(r, c) = (p - (static_cast<int>(c) == labels[r] ? 1.0 : 0.0)) * inv_n;
    }
  }
  return grad;
}

double max_abs_grad(const NetworkGrads& grads) {
  double out = 0.0;
  for (const LayerGrads& layer : grads.layers) {
    for (double v : layer.weights) out = std::max(out, std::abs(v));
    for (double v : layer.bias) out = std::max(out, std::abs(v));
  }
  return out;
}

// Column-wise z-scoring with the reference matrix's statistics; constant
// columns are left unscaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  explicit Standardizer(const Matrix& reference) {
    mean = column_means(reference);
    scale.assign(reference.cols(), 1.0);
    if (reference.rows() > 1) {
      for (std::size_t c = 0; c < reference.cols(); ++c) {
        double ss = 0.0;
        for (std::size_t r = 0; r < reference.rows(); ++r) {
          const double d = reference(r, c) - mean[c];
          ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(reference.rows() - 1));
        if (sd > 0.0) scale[c] = 1.0 / sd;
      }
    }
  }

  Matrix apply(const Matrix& m) const {
    Matrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r)
      for (std::size_t c = 0; c < out.cols(); ++c)
        out(r, c) = (out(r, c) - mean[c]) * scale[c];
    return out;
  }
};

GanLevel make_level(LevelTag tag, std::size_t cond_dim, std::size_t sample_dim,
                    const TrainConfig& cfg) {
  const std::uint64_t base = tag == LevelTag::low ? 10 : 20;
  GanLevel level;
  level.tag = tag;
  level.generator = init_network(generator_arch(cond_dim, sample_dim),
                                 mix_seed(cfg.seed, base + 1));
  level.discriminator = init_network(discriminator_arch(cond_dim, sample_dim),
                                     mix_seed(cfg.seed, base + 2));
  return level;
}

}  // namespace

ClipIndex::ClipIndex(std::vector<std::size_t> video_of_clip)
    : video_of_clip_(std::move(video_of_clip)) {
  if (video_of_clip_.empty()) return;
  const std::size_t max_id = *std::max_element(video_of_clip_.begin(), video_of_clip_.end());
  std::vector<std::size_t> owned(max_id + 1, 0);
  for (std::size_t id : video_of_clip_) ++owned[id];
  for (std::size_t id = 0; id <= max_id; ++id)
    if (owned[id] == 0)
      throw InvalidClipIndex("video id " + std::to_string(id) + " owns no clips");
  video_count_ = max_id + 1;
}

void validate(const DomainBundle& bundle) {
  const std::size_t n_clips = bundle.clip_index.clip_count();
  if (bundle.frame_feats.rows() != n_clips || bundle.clip_feats.rows() != n_clips ||
      bundle.frame_shared_feats.rows() != n_clips)
    throw ShapeMismatch("bundle: frame/clip/shared rows must all equal the clip count " +
                        std::to_string(n_clips));
  if (n_clips == 0) throw EmptyDataset("bundle: no clips");
  if (bundle.source_feats.rows() == 0) throw EmptyDataset("bundle: no source rows");
  if (bundle.source_labels.size() != bundle.source_feats.rows())
    throw ShapeMismatch("bundle: source labels do not match source rows");
  if (bundle.frame_shared_feats.cols() != bundle.source_feats.cols())
    throw ShapeMismatch("bundle: source and frame features live in different spaces");

  int max_label = 0;
  for (int label : bundle.source_labels) {
    if (label < 0) throw ClassMismatch("bundle: negative source label");
    max_label = std::max(max_label, label);
  }
  std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
  for (int label : bundle.source_labels) seen[static_cast<std::size_t>(label)] = true;
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (!seen[c]) throw ClassMismatch("bundle: class " + std::to_string(c) +
                                      " has no source examples");

  if (bundle.video_labels &&
      bundle.video_labels->size() != bundle.clip_index.video_count())
    throw ShapeMismatch("bundle: video labels do not match the video count");
}

Matrix average_clips(const Matrix& clip_rows, const ClipIndex& idx) {
  if (idx.clip_count() != clip_rows.rows())
    throw InvalidClipIndex("average_clips: index covers " + std::to_string(idx.clip_count()) +
                           " clips but the matrix has " + std::to_string(clip_rows.rows()) +
                           " rows");
  Matrix out(idx.video_count(), clip_rows.cols());
  std::vector<double> counts(idx.video_count(), 0.0);
  for (std::size_t k = 0; k < clip_rows.rows(); ++k) {
    const std::size_t video = idx.video_of(k);
    counts[video] += 1.0;
    for (std::size_t c = 0; c < clip_rows.cols(); ++c) out(video, c) += clip_rows(k, c);
  }
  for (std::size_t v = 0; v < out.rows(); ++v)
    for (std::size_t c = 0; c < out.cols(); ++c) out(v, c) /= counts[v];
  return out;
}

double evaluate_transfer(const Matrix& source_feats, const std::vector<int>& source_labels,
                         const Matrix& target_feats, const std::vector<int>& target_labels,
                         const TrainConfig& cfg) {
  validate(cfg);
  if (source_feats.cols() != target_feats.cols())
    throw ShapeMismatch("evaluate_transfer: source has " +
                        std::to_string(source_feats.cols()) + " feature dims, target has " +
                        std::to_string(target_feats.cols()));
  if (source_feats.rows() != source_labels.size())
    throw ShapeMismatch("evaluate_transfer: source labels do not match rows");
  if (target_feats.rows() != target_labels.size())
    throw ShapeMismatch("evaluate_transfer: target labels do not match rows");
  if (source_feats.rows() == 0) throw EmptyDataset("evaluate_transfer: no source rows");
  if (target_feats.rows() == 0) throw EmptyDataset("evaluate_transfer: no target rows");

  std::set<int> source_classes(source_labels.begin(), source_labels.end());
  for (int label : target_labels)
    if (!source_classes.count(label))
      throw ClassMismatch("evaluate_transfer: target class " + std::to_string(label) +
                          " absent from source");
  const int max_class = *std::max_element(source_labels.begin(), source_labels.end());
  const std::size_t classes = static_cast<std::size_t>(max_class) + 1;

  const Standardizer standardizer(source_feats);
  const Matrix source_std = standardizer.apply(source_feats);
  const Matrix target_std = standardizer.apply(target_feats);

  // Convex objective, zero init; adaptive-step full-batch descent to the
  // gradient tolerance or the iteration cap.
  MlpNetwork classifier;
  Layer layer;
  layer.weights = Matrix(classes, source_std.cols());
  layer.bias.assign(classes, 0.0);
  layer.activation = Activation::linear;
  classifier.layers.push_back(std::move(layer));

  AdamParams adam;
  adam.lr = kClassifierLearningRate;
  AdamState state = make_adam_state(classifier, adam);

  for (std::size_t it = 0; it < cfg.classifier_iterations; ++it) {
    const ForwardTrace trace = forward(classifier, source_std);
    const Matrix logit_grad = softmax_ce_grad(trace.output(), source_labels);
    const NetworkGrads grads = backward(classifier, trace, logit_grad);
    if (max_abs_grad(grads) < cfg.classifier_tolerance) break;
    adam_step(classifier, grads, state);
  }

  const Matrix target_logits = forward(classifier, target_std).output();
  std::size_t correct = 0;
  for (std::size_t r = 0; r < target_logits.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < target_logits.cols(); ++c)
      if (target_logits(r, c) > target_logits(r, best)) best = c;
    if (static_cast<int>(best) == target_labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(target_logits.rows());
}

std::vector<LayerSpec> generator_arch(std::size_t in_dim, std::size_t out_dim) {
  if (in_dim < 1 || out_dim < 1) throw BadSpec("generator_arch: zero dimension");
  const std::size_t hidden = std::max(std::max(in_dim, out_dim) / 2, kMinHidden);
  const std::size_t last_hidden = std::max(hidden, out_dim);
  return {{in_dim, hidden, Activation::rectifier},
          {hidden, hidden, Activation::rectifier},
          {hidden, last_hidden, Activation::rectifier},
          {last_hidden, out_dim, Activation::linear}};
}

std::vector<LayerSpec> discriminator_arch(std::size_t condition_dim, std::size_t sample_dim) {
  if (condition_dim < 1 || sample_dim < 1) throw BadSpec("discriminator_arch: zero dimension");
  const std::size_t width = condition_dim + sample_dim;
  const std::size_t h1 = std::max(width / 2, kMinHidden);
  const std::size_t h2 = std::max(width / 4, kMinHidden / 2);
  return {{width, h1, Activation::rectifier},
          {h1, h2, Activation::rectifier},
          {h2, 1, Activation::linear}};
}

PipelineResult run_pipeline(const DomainBundle& bundle, const TrainConfig& cfg) {
  validate(cfg);
  validate(bundle);

  const std::size_t frame_dim = bundle.frame_feats.cols();
  const std::size_t clip_dim = bundle.clip_feats.cols();
  const std::size_t shared_dim = bundle.frame_shared_feats.cols();

  PipelineResult result;

  // Stage one: frame features conditioned against real clip features.
  GanLevel low = make_level(LevelTag::low, frame_dim, clip_dim, cfg);
  auto [trained_low, low_report] =
      train_gan(std::move(low), bundle.frame_feats, bundle.clip_feats, cfg);
  const Matrix generated_clip_feats = generate(trained_low, bundle.frame_feats);

  // Stage two: generated clip features conditioned against shared-space
  // frame features.
  GanLevel high = make_level(LevelTag::high, clip_dim, shared_dim, cfg);
  auto [trained_high, high_report] =
      train_gan(std::move(high), generated_clip_feats, bundle.frame_shared_feats, cfg);

  // Project the real clip features and average per video.
  const Matrix projected_clips = generate(trained_high, bundle.clip_feats);
  result.target_feats = average_clips(projected_clips, bundle.clip_index);
  result.source_feats = bundle.source_feats;
  result.low = std::move(trained_low);
  result.high = std::move(trained_high);
  result.low_report = std::move(low_report);
  result.high_report = std::move(high_report);

  if (bundle.video_labels) {
    result.accuracy = evaluate_transfer(bundle.source_feats, bundle.source_labels,
                                        result.target_feats, *bundle.video_labels, cfg);
    const Matrix frame_mean_feats =
        average_clips(bundle.frame_shared_feats, bundle.clip_index);
    result.baseline_accuracy =
        evaluate_transfer(bundle.source_feats, bundle.source_labels, frame_mean_feats,
                          *bundle.video_labels, cfg);
  }
  return result;
}

PipelineResult run_ablation(const DomainBundle& bundle, const TrainConfig& cfg,
                            Ablation variant) {
  TrainConfig ablated = cfg;
  ablated.ablation = variant;
  return run_pipeline(bundle, ablated);
}

}  // namespace higan
