#pragma once

#include <optional>
#include <vector>

#include "higan/gan_trainer.hpp"
#include "higan/matrix.hpp"

namespace higan {

/// Maps each clip row to the video it belongs to. Video ids must form a
/// gap-free partition of [0, video_count): every id owns at least one clip.
class ClipIndex {
 public:
  ClipIndex() = default;
  explicit ClipIndex(std::vector<std::size_t> video_of_clip);

  std::size_t clip_count() const { return video_of_clip_.size(); }
  std::size_t video_count() const { return video_count_; }
  std::size_t video_of(std::size_t clip) const { return video_of_clip_[clip]; }
  const std::vector<std::size_t>& ids() const { return video_of_clip_; }

  bool operator==(const ClipIndex&) const = default;

 private:
  std::vector<std::size_t> video_of_clip_;
  std::size_t video_count_ = 0;
};

/// All per-domain inputs of one transfer problem. The three clip-aligned
/// matrices share row order: row k of frame_feats, clip_feats and
/// frame_shared_feats describe the same clip.
struct DomainBundle {
  Matrix source_feats;        // labeled source images, shared feature space
  std::vector<int> source_labels;
  Matrix frame_shared_feats;  // video frames mapped into the shared space
  Matrix frame_feats;         // raw per-frame features
  Matrix clip_feats;          // raw per-clip features
  ClipIndex clip_index;
  std::optional<std::vector<int>> video_labels;  // evaluation only
};

void validate(const DomainBundle& bundle);

struct PipelineResult {
  Matrix target_feats;  // one row per video, shared feature space
  Matrix source_feats;
  GanLevel low;
  GanLevel high;
  TrainReport low_report;
  TrainReport high_report;
  std::optional<double> accuracy;
  std::optional<double> baseline_accuracy;  // classifier on per-video means of frame_shared_feats
};

/// Full two-stage run: train the low-level GAN on (frame, clip) pairs,
/// project frames into clip space, train the high-level GAN on the projected
/// pairs, map real clip features into the shared space, then average the
/// clips of each video. Transfer accuracy is evaluated when video labels are
/// present.
PipelineResult run_pipeline(const DomainBundle& bundle, const TrainConfig& cfg);

/// run_pipeline with cfg.ablation forced to the given variant.
PipelineResult run_ablation(const DomainBundle& bundle, const TrainConfig& cfg,
                            Ablation variant);

/// Row j of the output is the arithmetic mean of the clip rows owned by
/// video j, accumulated in ascending clip order.
Matrix average_clips(const Matrix& clip_rows, const ClipIndex& idx);

/// Trains a multinomial logistic-regression classifier on the source rows
/// and returns the fraction of target rows whose argmax class matches.
double evaluate_transfer(const Matrix& source_feats, const std::vector<int>& source_labels,
                         const Matrix& target_feats, const std::vector<int>& target_labels,
                         const TrainConfig& cfg);

/// Generator layout: in -> h -> h -> max(h, out) -> out with rectifier
/// hidden layers, a linear output and h = max(in, out)/2 (floored at 32).
std::vector<LayerSpec> generator_arch(std::size_t in_dim, std::size_t out_dim);

/// Discriminator layout over concatenated (condition, sample) rows:
/// n -> n/2 -> n/4 -> 1 with rectifier hidden layers and a linear score.
std::vector<LayerSpec> discriminator_arch(std::size_t condition_dim, std::size_t sample_dim);

}  // namespace higan
