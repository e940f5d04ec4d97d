#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "higan/matrix.hpp"
#include "higan/mlp.hpp"
#include "higan/pipeline.hpp"

namespace higan {

// Feature container (HGF1): a 24-byte header — magic "HGF1", u32 version 1,
// u64 row count, u64 column count, all little-endian — followed by the
// row-major payload as IEEE-754 binary32 little-endian values. Files store
// single precision; in memory everything is double.

void write_features(const std::filesystem::path& path, const Matrix& m);
Matrix read_features(const std::filesystem::path& path);

// Plain text, one nonnegative integer per line.
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::filesystem::path& path);

// Plain text, line k holds the video id of clip k.
void write_clip_index(const std::filesystem::path& path, const ClipIndex& idx);
ClipIndex read_clip_index(const std::filesystem::path& path);

// Network checkpoint: a directory with manifest.txt (seed line plus one
// layer spec per line, in order) and per-layer weight/bias feature files.
void save_network(const std::filesystem::path& dir, const MlpNetwork& net);
MlpNetwork load_network(const std::filesystem::path& dir);

/// Desk-scale two-domain generator. All observed spaces are linear images
/// of one latent hierarchy (class prototype -> video latent -> clip latent),
/// so a ground-truth frame-to-clip and clip-to-shared mapping exists by
/// construction. `noise` is the standard deviation of every perturbation,
/// expressed as a fraction of the smallest distance between class
/// prototypes.
struct SynthSpec {
  std::size_t classes = 3;
  std::size_t videos_per_class = 20;
  std::size_t clips_min = 5;
  std::size_t clips_max = 10;
  std::size_t images_per_class = 50;
  std::size_t frame_dim = 6;
  std::size_t clip_dim = 4;
  std::size_t shared_dim = 5;
  double noise = 0.05;
  std::uint64_t seed = 0;
};

DomainBundle synthesize(const SynthSpec& spec);

}  // namespace higan
