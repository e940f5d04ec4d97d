#include "higan/data_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "higan/rng.hpp"

namespace higan {

namespace {

constexpr char kMagic[4] = {'H', 'G', 'F', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 24;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace

void write_features(const std::filesystem::path& path, const Matrix& m) {
  ensure_finite(m, path.string());
  std::string bytes;
  bytes.reserve(kHeaderBytes + m.size() * 4);
  bytes.append(kMagic, 4);
  put_u32(bytes, kVersion);
  put_u64(bytes, m.rows());
  put_u64(bytes, m.cols());
  for (double v : m) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f))
      throw NonFiniteValue(path.string() + ": value " + std::to_string(v) +
                           " overflows single precision");
    put_u32(bytes, std::bit_cast<std::uint32_t>(f));
  }
  write_file(path, bytes);
}

Matrix read_features(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < kHeaderBytes)
    throw TruncatedPayload(path.string() + ": file shorter than the 24-byte header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::memcmp(p, kMagic, 4) != 0)
    throw BadMagic(path.string() + ": magic is not HGF1");
  const std::uint32_t version = get_u32(p + 4);
  if (version != kVersion)
    throw VersionUnsupported(path.string() + ": version " + std::to_string(version));
  const std::uint64_t rows = get_u64(p + 8);
  const std::uint64_t cols = get_u64(p + 16);
  if (cols != 0 && rows > std::numeric_limits<std::uint64_t>::max() / 4 / cols)
    throw TruncatedPayload(path.string() + ": implausible dimensions");
  const std::uint64_t expected = rows * cols * 4;
  if (bytes.size() - kHeaderBytes != expected)
    throw TruncatedPayload(path.string() + ": payload is " +
                           std::to_string(bytes.size() - kHeaderBytes) + " bytes, header says " +
                           std::to_string(expected));

  Matrix m(rows, cols);
  const unsigned char* cursor = p + kHeaderBytes;
  for (std::size_t i = 0; i < m.size(); ++i, cursor += 4) {
    const float f = std::bit_cast<float>(get_u32(cursor));
    if (!std::isfinite(f))
      throw NonFiniteValue(path.string() + ": non-finite value at index " + std::to_string(i));
    m.data()[i] = static_cast<double>(f);
  }
  return m;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::string bytes;
  for (int label : labels) {
    bytes += std::to_string(label);
    bytes += '\n';
  }
  write_file(path, bytes);
}

namespace {

std::vector<long long> read_integer_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<long long> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(path.string() + ": empty line " + std::to_string(line_no));
    }
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(line, &used);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       " is not an integer: '" + line + "'");
    }
    if (used != line.size())
      throw ParseError(path.string() + ": trailing characters on line " +
                       std::to_string(line_no));
    if (value < 0)
      throw ParseError(path.string() + ": negative value on line " + std::to_string(line_no));
    values.push_back(value);
  }
  return values;
}

}  // namespace

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::vector<int> labels;
  for (long long v : read_integer_lines(path)) labels.push_back(static_cast<int>(v));
  return labels;
}

void write_clip_index(const std::filesystem::path& path, const ClipIndex& idx) {
  std::string bytes;
  for (std::size_t id : idx.ids()) {
    bytes += std::to_string(id);
    bytes += '\n';
  }
  write_file(path, bytes);
}

ClipIndex read_clip_index(const std::filesystem::path& path) {
  std::vector<std::size_t> ids;
  for (long long v : read_integer_lines(path)) ids.push_back(static_cast<std::size_t>(v));
  return ClipIndex(std::move(ids));
}

void save_network(const std::filesystem::path& dir, const MlpNetwork& net) {
  std::filesystem::create_directories(dir);
  std::string manifest = "seed " + std::to_string(net.seed) + "\n";
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const Layer& layer = net.layers[li];
    manifest += "layer " + std::to_string(layer.weights.cols()) + " " +
                std::to_string(layer.weights.rows()) + " " +
                (layer.activation == Activation::rectifier ? "rectifier" : "linear") + "\n";
    write_features(dir / ("layer" + std::to_string(li) + "_weights.hgf"), layer.weights);
    Matrix bias(1, layer.bias.size());
    for (std::size_t i = 0; i < layer.bias.size(); ++i) bias(0, i) = layer.bias[i];
    write_features(dir / ("layer" + std::to_string(li) + "_bias.hgf"), bias);
  }
  write_file(dir / "manifest.txt", manifest);
}

MlpNetwork load_network(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  if (!in) throw IoError("cannot open " + (dir / "manifest.txt").string());

  MlpNetwork net;
  std::string line;
  std::size_t line_no = 0;
  std::size_t layer_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "seed") {
      if (!(fields >> net.seed))
        throw ParseError(dir.string() + "/manifest.txt: bad seed on line " +
                         std::to_string(line_no));
    } else if (tag == "layer") {
      std::size_t in_dim = 0, out_dim = 0;
      std::string activation;
      if (!(fields >> in_dim >> out_dim >> activation))
        throw ParseError(dir.string() + "/manifest.txt: bad layer on line " +
                         std::to_string(line_no));
      Layer layer;
      if (activation == "rectifier")
        layer.activation = Activation::rectifier;
      else if (activation == "linear")
        layer.activation = Activation::linear;
      else
        throw ParseError(dir.string() + "/manifest.txt: unknown activation '" + activation +
                         "'");
      layer.weights =
          read_features(dir / ("layer" + std::to_string(layer_index) + "_weights.hgf"));
      if (layer.weights.rows() != out_dim || layer.weights.cols() != in_dim)
        throw ShapeMismatch(dir.string() + ": layer " + std::to_string(layer_index) +
                            " weight file does not match the manifest");
      const Matrix bias =
          read_features(dir / ("layer" + std::to_string(layer_index) + "_bias.hgf"));
      if (bias.rows() != 1 || bias.cols() != out_dim)
        throw ShapeMismatch(dir.string() + ": layer " + std::to_string(layer_index) +
                            " bias file does not match the manifest");
      layer.bias.assign(bias.begin(), bias.end());
      net.layers.push_back(std::move(layer));
      ++layer_index;
    } else {
      throw ParseError(dir.string() + "/manifest.txt: unknown entry '" + tag + "'");
    }
  }
  if (net.layers.empty()) throw ParseError(dir.string() + ": manifest lists no layers");
  for (std::size_t li = 1; li < net.layers.size(); ++li)
    if (net.layers[li].weights.cols() != net.layers[li - 1].weights.rows())
      throw ShapeMismatch(dir.string() + ": layer " + std::to_string(li) +
                          " does not chain with the previous layer");
  return net;
}

namespace {

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) sum += a(r, c) * x[c];
    out[r] = sum;
  }
  return out;
}

std::vector<double> perturbed(const std::vector<double>& base, double sigma, Rng& rng) {
  std::vector<double> out = base;
  for (double& v : out) v += sigma * rng.normal();
  return out;
}

void emit_row(Matrix& m, std::size_t row, const Matrix& map, const std::vector<double>& latent,
              double sigma, Rng& rng) {
  const std::vector<double> v = matvec(map, latent);
  for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) = v[c] + sigma * rng.normal();
}

}  // namespace

DomainBundle synthesize(const SynthSpec& spec) {
  if (spec.classes < 2) throw BadSpec("synthesize: need at least 2 classes");
  if (spec.videos_per_class < 1) throw BadSpec("synthesize: need at least 1 video per class");
  if (spec.images_per_class < 1) throw BadSpec("synthesize: need at least 1 image per class");
  if (spec.clips_min < 1 || spec.clips_min > spec.clips_max)
    throw BadSpec("synthesize: invalid clips-per-video range");
  if (spec.frame_dim < 1 || spec.clip_dim < 1 || spec.shared_dim < 1)
    throw BadSpec("synthesize: feature dims must be at least 1");
  if (spec.noise < 0) throw BadSpec("synthesize: noise must be nonnegative");

  Rng rng(spec.seed);
  const std::size_t latent_dim =
      std::min(spec.frame_dim, std::min(spec.clip_dim, spec.shared_dim));

  // Class prototypes on the radius-3 sphere, redrawn until pairwise
  // distances reach 3 so the separation never collapses.
  std::vector<std::vector<double>> prototypes;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<double> candidate(latent_dim);
      double norm = 0.0;
      for (double& v : candidate) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (double& v : candidate) v *= 3.0 / norm;
      bool far_enough = true;
      for (const auto& other : prototypes) {
        double dist = 0.0;
        for (std::size_t i = 0; i < latent_dim; ++i)
          dist += (candidate[i] - other[i]) * (candidate[i] - other[i]);
        if (std::sqrt(dist) < 3.0) {
          far_enough = false;
          break;
        }
      }
      if (far_enough || attempt == 999) {
        prototypes.push_back(std::move(candidate));
        break;
      }
    }
  }
  if (prototypes.size() != spec.classes)
    throw BadSpec("synthesize: could not place separated class prototypes");

  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < prototypes.size(); ++a)
    for (std::size_t b = a + 1; b < prototypes.size(); ++b) {
      double dist = 0.0;
      for (std::size_t i = 0; i < latent_dim; ++i)
        dist += (prototypes[a][i] - prototypes[b][i]) * (prototypes[a][i] - prototypes[b][i]);
      separation = std::min(separation, std::sqrt(dist));
    }
  const double sigma = spec.noise * separation;

  const auto random_map = [&](std::size_t rows) {
    Matrix map(rows, latent_dim);
    const double scl = 1.0 / std::sqrt(static_cast<double>(latent_dim));
    for (double& v : map) v = rng.normal() * scl;
    return map;
  };
  const Matrix frame_map = random_map(spec.frame_dim);
  const Matrix clip_map = random_map(spec.clip_dim);
  const Matrix shared_map = random_map(spec.shared_dim);

  DomainBundle bundle;

  const std::size_t n_source = spec.classes * spec.images_per_class;
  bundle.source_feats = Matrix(n_source, spec.shared_dim);
  bundle.source_labels.reserve(n_source);
  std::size_t source_row = 0;
  for (std::size_t c = 0; c < spec.classes; ++c)
    for (std::size_t i = 0; i < spec.images_per_class; ++i) {
      const std::vector<double> latent = perturbed(prototypes[c], sigma, rng);
      emit_row(bundle.source_feats, source_row++, shared_map, latent, sigma, rng);
      bundle.source_labels.push_back(static_cast<int>(c));
    }

  struct ClipRow {
    std::vector<double> latent;
    std::size_t video = 0;
  };
  std::vector<ClipRow> clip_rows;
  std::vector<std::size_t> video_ids;
  std::vector<int> video_labels;
  std::size_t video = 0;
  for (std::size_t c = 0; c < spec.classes; ++c)
    for (std::size_t v = 0; v < spec.videos_per_class; ++v, ++video) {
      const std::vector<double> video_latent = perturbed(prototypes[c], sigma, rng);
      const std::size_t clips =
          spec.clips_min + static_cast<std::size_t>(rng.below(spec.clips_max - spec.clips_min + 1));
      for (std::size_t k = 0; k < clips; ++k) {
        clip_rows.push_back({perturbed(video_latent, sigma, rng), video});
        video_ids.push_back(video);
      }
      video_labels.push_back(static_cast<int>(c));
    }

  const std::size_t n_clips = clip_rows.size();
  bundle.frame_feats = Matrix(n_clips, spec.frame_dim);
  bundle.clip_feats = Matrix(n_clips, spec.clip_dim);
  bundle.frame_shared_feats = Matrix(n_clips, spec.shared_dim);
  for (std::size_t k = 0; k < n_clips; ++k) {
    emit_row(bundle.frame_feats, k, frame_map, clip_rows[k].latent, sigma, rng);
    emit_row(bundle.clip_feats, k, clip_map, clip_rows[k].latent, sigma, rng);
    emit_row(bundle.frame_shared_feats, k, shared_map, clip_rows[k].latent, sigma, rng);
  }

  bundle.clip_index = ClipIndex(std::move(video_ids));
  bundle.video_labels = std::move(video_labels);
  validate(bundle);
  return bundle;
}

}  // namespace higan
