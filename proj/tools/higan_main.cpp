// Command-line front end: synthesize desk-scale bundles, train either GAN
// stage, run the full pipeline, and evaluate transfer accuracy.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "higan/data_io.hpp"
#include "higan/gan_trainer.hpp"
#include "higan/pipeline.hpp"
#include "higan/rng.hpp"
#include "higan/train_config.hpp"

namespace fs = std::filesystem;
using namespace higan;

namespace {

struct BundlePaths {
  std::string source_feats;
  std::string source_labels;
  std::string frame_shared_feats;
  std::string frame_feats;
  std::string clip_feats;
  std::string clip_index;
  std::string video_labels;  // optional
};

void add_config_flags(CLI::App* cmd, TrainConfig& cfg) {
  cmd->add_option("--lambda1", cfg.lambda1, "Low-level adversarial weight");
  cmd->add_option("--lambda2", cfg.lambda2, "Low-level correlation weight");
  cmd->add_option("--lambda3", cfg.lambda3, "High-level adversarial weight");
  cmd->add_option("--lambda4", cfg.lambda4, "High-level correlation weight");
  cmd->add_option("--lr-low", cfg.lr_low, "Low-level learning rate");
  cmd->add_option("--lr-high", cfg.lr_high, "High-level learning rate");
  cmd->add_option("--batch", cfg.batch_size, "Minibatch size");
  cmd->add_option("--iters", cfg.iterations, "Training iterations per GAN");
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_option("--classifier-iters", cfg.classifier_iterations,
                  "Iteration cap for the transfer classifier");
  cmd->add_option("--classifier-tol", cfg.classifier_tolerance,
                  "Gradient tolerance for the transfer classifier");
  const std::map<std::string, Ablation> ablations{
      {"full", Ablation::full},
      {"coral_only", Ablation::coral_only},
      {"adversarial_only", Ablation::adversarial_only}};
  cmd->add_option("--ablation", cfg.ablation, "Loss-term ablation variant")
      ->transform(CLI::CheckedTransformer(ablations, CLI::ignore_case));
}

void add_bundle_flags(CLI::App* cmd, BundlePaths& paths, bool labels_required) {
  cmd->add_option("--hs", paths.source_feats, "Source feature file")->required();
  cmd->add_option("--labels-s", paths.source_labels, "Source label file")->required();
  cmd->add_option("--hf", paths.frame_shared_feats, "Frame features in the shared space")
      ->required();
  cmd->add_option("--f", paths.frame_feats, "Raw frame feature file")->required();
  cmd->add_option("--v", paths.clip_feats, "Raw clip feature file")->required();
  cmd->add_option("--clips", paths.clip_index, "Clip-to-video index file")->required();
  auto* labels = cmd->add_option("--labels-t", paths.video_labels,
                                 "Video label file (enables accuracy evaluation)");
  if (labels_required) labels->required();
}

DomainBundle load_bundle(const BundlePaths& paths) {
  DomainBundle bundle;
  bundle.source_feats = read_features(paths.source_feats);
  bundle.source_labels = read_labels(paths.source_labels);
  bundle.frame_shared_feats = read_features(paths.frame_shared_feats);
  bundle.frame_feats = read_features(paths.frame_feats);
  bundle.clip_feats = read_features(paths.clip_feats);
  bundle.clip_index = read_clip_index(paths.clip_index);
  if (!paths.video_labels.empty()) bundle.video_labels = read_labels(paths.video_labels);
  validate(bundle);
  return bundle;
}

void write_report(const fs::path& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  report.write_csv(out);
}

std::string format_accuracy(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "accuracy=%.4f", accuracy);
  return buf;
}

int run_synth(const SynthSpec& spec, const std::string& out_dir) {
  const DomainBundle bundle = synthesize(spec);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_features(dir / "H_s.hgf", bundle.source_feats);
  write_features(dir / "H_f.hgf", bundle.frame_shared_feats);
  write_features(dir / "F.hgf", bundle.frame_feats);
  write_features(dir / "V.hgf", bundle.clip_feats);
  write_labels(dir / "labels_s.txt", bundle.source_labels);
  write_labels(dir / "labels_t.txt", *bundle.video_labels);
  write_clip_index(dir / "clips.txt", bundle.clip_index);
  std::cout << "wrote bundle to " << out_dir << " (" << bundle.source_feats.rows()
            << " source rows, " << bundle.clip_feats.rows() << " clips, "
            << bundle.clip_index.video_count() << " videos)\n";
  return 0;
}

int run_full_pipeline(const BundlePaths& paths, const TrainConfig& cfg,
                      const std::string& out_dir) {
  const DomainBundle bundle = load_bundle(paths);
  const PipelineResult result = run_pipeline(bundle, cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_features(dir / "H_t.hgf", result.target_feats);
  write_features(dir / "H_s.hgf", result.source_feats);
  save_network(dir / "g_low", result.low.generator);
  save_network(dir / "d_low", result.low.discriminator);
  save_network(dir / "g_high", result.high.generator);
  save_network(dir / "d_high", result.high.discriminator);
  write_report(dir / "report_low.csv", result.low_report);
  write_report(dir / "report_high.csv", result.high_report);

  if (result.accuracy) {
    const std::string line = format_accuracy(*result.accuracy);
    std::ofstream metrics(dir / "metrics.txt");
    if (!metrics) throw IoError("cannot open " + (dir / "metrics.txt").string());
    metrics << line << '\n';
    if (result.baseline_accuracy)
      metrics << "baseline_" << format_accuracy(*result.baseline_accuracy) << '\n';
    std::cout << line << '\n';
  }
  std::cout << "wrote pipeline outputs to " << out_dir << '\n';
  return 0;
}

int run_train_low(const std::string& frame_path, const std::string& clip_path,
                  const TrainConfig& cfg, const std::string& out_dir) {
  const Matrix frames = read_features(frame_path);
  const Matrix clips = read_features(clip_path);

  GanLevel level;
  level.tag = LevelTag::low;
  level.generator = init_network(generator_arch(frames.cols(), clips.cols()),
                                 mix_seed(cfg.seed, 11));
  level.discriminator = init_network(discriminator_arch(frames.cols(), clips.cols()),
                                     mix_seed(cfg.seed, 12));
  auto [trained, report] = train_gan(std::move(level), frames, clips, cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  save_network(dir / "g_low", trained.generator);
  save_network(dir / "d_low", trained.discriminator);
  write_report(dir / "report_low.csv", report);
  std::cout << "wrote low-level checkpoints to " << out_dir << '\n';
  return 0;
}

int run_train_high(const std::string& frame_path, const std::string& shared_path,
                   const std::string& low_dir, const TrainConfig& cfg,
                   const std::string& out_dir) {
  const Matrix frames = read_features(frame_path);
  const Matrix shared = read_features(shared_path);

  GanLevel low;
  low.tag = LevelTag::low;
  low.generator = load_network(fs::path(low_dir) / "g_low");
  const Matrix generated_clips = generate(low, frames);

  GanLevel level;
  level.tag = LevelTag::high;
  level.generator = init_network(generator_arch(generated_clips.cols(), shared.cols()),
                                 mix_seed(cfg.seed, 21));
  level.discriminator =
      init_network(discriminator_arch(generated_clips.cols(), shared.cols()),
                   mix_seed(cfg.seed, 22));
  auto [trained, report] = train_gan(std::move(level), generated_clips, shared, cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  save_network(dir / "g_high", trained.generator);
  save_network(dir / "d_high", trained.discriminator);
  write_report(dir / "report_high.csv", report);
  std::cout << "wrote high-level checkpoints to " << out_dir << '\n';
  return 0;
}

int run_eval(const std::string& source_path, const std::string& source_labels_path,
             const std::string& target_path, const std::string& target_labels_path,
             const TrainConfig& cfg) {
  const Matrix source = read_features(source_path);
  const std::vector<int> source_labels = read_labels(source_labels_path);
  const Matrix target = read_features(target_path);
  const std::vector<int> target_labels = read_labels(target_labels_path);
  const double accuracy =
      evaluate_transfer(source, source_labels, target, target_labels, cfg);
  std::cout << format_accuracy(accuracy) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level conditional GAN for heterogeneous feature-space transfer"};
  app.require_subcommand(1);

  TrainConfig cfg;
  SynthSpec synth_spec;
  BundlePaths paths;
  std::string out_dir;
  std::string frame_path, clip_path, shared_path, low_dir;
  std::string eval_source, eval_source_labels, eval_target, eval_target_labels;

  auto* synth = app.add_subcommand("synth", "Write a synthetic feature bundle");
  synth->add_option("--classes", synth_spec.classes, "Number of classes");
  synth->add_option("--videos-per-class", synth_spec.videos_per_class, "Videos per class");
  synth->add_option("--clips-min", synth_spec.clips_min, "Minimum clips per video");
  synth->add_option("--clips-max", synth_spec.clips_max, "Maximum clips per video");
  synth->add_option("--images-per-class", synth_spec.images_per_class, "Source images per class");
  synth->add_option("--df", synth_spec.frame_dim, "Frame feature dimension");
  synth->add_option("--dv", synth_spec.clip_dim, "Clip feature dimension");
  synth->add_option("--dh", synth_spec.shared_dim, "Shared feature dimension");
  synth->add_option("--noise", synth_spec.noise,
                    "Noise scale as a fraction of class-prototype separation");
  synth->add_option("--seed", synth_spec.seed, "Random seed");
  synth->add_option("--out", out_dir, "Output directory")->required();

  auto* pipeline = app.add_subcommand("pipeline", "Run both GAN stages and emit H_t");
  add_bundle_flags(pipeline, paths, /*labels_required=*/false);
  add_config_flags(pipeline, cfg);
  pipeline->add_option("--out", out_dir, "Output directory")->required();

  auto* train_low = app.add_subcommand("train-low", "Train only the low-level GAN");
  train_low->add_option("--f", frame_path, "Raw frame feature file")->required();
  train_low->add_option("--v", clip_path, "Raw clip feature file")->required();
  add_config_flags(train_low, cfg);
  train_low->add_option("--out", out_dir, "Output directory")->required();

  auto* train_high = app.add_subcommand("train-high", "Train only the high-level GAN");
  train_high->add_option("--f", frame_path, "Raw frame feature file")->required();
  train_high->add_option("--hf", shared_path, "Frame features in the shared space")->required();
  train_high->add_option("--low", low_dir, "Directory holding the g_low checkpoint")->required();
  add_config_flags(train_high, cfg);
  train_high->add_option("--out", out_dir, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate transfer accuracy");
  eval->add_option("--hs", eval_source, "Source feature file")->required();
  eval->add_option("--labels-s", eval_source_labels, "Source label file")->required();
  eval->add_option("--ht", eval_target, "Target feature file")->required();
  eval->add_option("--labels-t", eval_target_labels, "Target label file")->required();
  add_config_flags(eval, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return run_synth(synth_spec, out_dir);
    if (pipeline->parsed()) return run_full_pipeline(paths, cfg, out_dir);
    if (train_low->parsed()) return run_train_low(frame_path, clip_path, cfg, out_dir);
    if (train_high->parsed())
      return run_train_high(frame_path, shared_path, low_dir, cfg, out_dir);
    if (eval->parsed())
      return run_eval(eval_source, eval_source_labels, eval_target, eval_target_labels, cfg);
  } catch (const Error& e) {
    std::cerr << "error:" << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:Internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
