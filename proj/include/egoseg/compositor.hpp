#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoseg/chroma.hpp"
#include "egoseg/image_io.hpp"
#include "egoseg/log.hpp"
#include "egoseg/manifest.hpp"
#include "egoseg/parallel.hpp"
#include "egoseg/qc.hpp"
#include "egoseg/raster.hpp"
#include "egoseg/resize.hpp"
#include "egoseg/rng.hpp"

namespace egoseg {

struct BackgroundEntry {
  std::string source;  // file name inside the source directory
  RgbImage image;
};

// Square scene images resized to target_size x target_size, in
// lexicographic order of their file names.
struct BackgroundPool {
  int target_size = 0;
  std::vector<BackgroundEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
};

inline BackgroundPool prepareBackgrounds(const fs::path& source_dir, int target_size) {
  if (target_size < 1) throw UsageError("background target size must be >= 1");
  BackgroundPool pool;
  pool.target_size = target_size;
  for (const auto& path : listImages(source_dir)) {
    RgbImage image(1, 1);
    try {
      image = loadRgb(path);
    } catch (const IoError& e) {
      logger().warn("skipping background {}: {}", path.string(), e.what());
      continue;
    }
    if (image.width() != image.height()) {
      logger().debug("skipping non-square background {} ({})", path.filename().string(),
                     image.size().str());
      continue;
    }
    pool.entries.push_back({path.filename().string(),
                            resizeImage(image, target_size, target_size,
                                        ResizeMode::bilinear)});
  }
  if (pool.empty()) throw EmptyPoolError();
  return pool;
}

struct CompositeConfig {
  std::uint64_t seed = 42;
  int feather_radius = 0;  // 0 = hard matte
  int copies = 1;          // backgrounds drawn per foreground

  void validate() const {
    if (feather_radius < 0) throw UsageError("feather_radius must be >= 0");
    if (copies < 1) throw UsageError("copies must be >= 1");
  }
};

// Blend weight of the foreground per pixel: 0 outside the mask, rising
// linearly with Euclidean distance to the nearest background pixel and
// saturating at 1 once that distance reaches `radius`. The image border does
// not count as background.
inline std::vector<double> featherAlpha(const BinaryMask& mask, int radius) {
  std::vector<double> alpha(mask.pixel_count(), 0.0);
  const int w = mask.width(), h = mask.height();
  const int r2 = radius * radius;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      int best = r2 + 1;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const int d2 = dx * dx + dy * dy;
          if (d2 >= best || !mask.contains(x + dx, y + dy)) continue;
          if (!mask.at(x + dx, y + dy)) best = d2;
        }
      }
      const double a = best > r2 ? 1.0 : std::sqrt(static_cast<double>(best)) / radius;
      alpha[static_cast<std::size_t>(y) * w + x] = std::min(1.0, a);
    }
  }
  return alpha;
}

inline RgbImage composite(const RgbImage& foreground, const BinaryMask& mask,
                          const RgbImage& background, const CompositeConfig& config) {
  config.validate();
  if (foreground.size() != mask.size() || foreground.size() != background.size()) {
    throw UsageError("composite: dimension mismatch (foreground " + foreground.size().str() +
                     ", mask " + mask.size().str() + ", background " +
                     background.size().str() + ")");
  }
  RgbImage out(foreground.size());
  auto fg = foreground.pixels();
  auto bg = background.pixels();
  auto dst = out.pixels();
  auto lbl = mask.labels();
  if (config.feather_radius == 0) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = lbl[i] ? fg[i] : bg[i];
    return out;
  }
  const auto alpha = featherAlpha(mask, config.feather_radius);
  auto mix = [](std::uint8_t f, std::uint8_t b, double a) {
    return static_cast<std::uint8_t>(std::floor(a * f + (1.0 - a) * b + 0.5));
  };
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double a = alpha[i];
    dst[i] = {mix(fg[i].r, bg[i].r, a), mix(fg[i].g, bg[i].g, a), mix(fg[i].b, bg[i].b, a)};
  }
  return out;
}

// Images named <prefix><index>, sorted by index. Other files are ignored, so
// foregrounds and masks may share one directory.
inline std::vector<std::pair<long long, fs::path>> indexedImages(const fs::path& dir,
                                                                 std::string_view prefix) {
  std::vector<std::pair<long long, fs::path>> out;
  for (auto& p : listImages(dir)) {
    const std::string stem = p.stem().string();
    if (!stem.starts_with(prefix)) continue;
    if (auto idx = parseFrameIndex(stem)) out.emplace_back(*idx, std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct RejectedSample {
  long long index = 0;
  std::string foreground;
  std::vector<std::string> reasons;
};

struct MissingSample {
  long long index = 0;
  std::string foreground;
  std::string reason;
};

struct BuildResult {
  std::size_t input_count = 0;
  std::vector<SampleManifest> manifest;
  std::vector<RejectedSample> rejected;
  std::vector<MissingSample> missing;
};

inline std::string sampleId(long long index, int copy, int copies) {
  std::string id = formatIndex(index);
  if (copies > 1) id += "_c" + std::to_string(copy);
  return id;
}

// Background drawn for one (foreground index, copy) pair. Seeded per pair,
// so it does not depend on processing order or on other samples' QC.
inline std::size_t assignBackground(std::uint64_t seed, long long index, int copy,
                                    std::size_t pool_size) {
  std::mt19937_64 engine(deriveSeed(seed, static_cast<std::uint64_t>(index),
                                    static_cast<std::uint64_t>(copy)));
  return static_cast<std::size_t>(uniformIndex(engine, pool_size));
}

// Composites every fg_<index> image in `fg_dir` with its gt_<index> mask
// from `mask_dir`. Writes images/, masks/, manifest.jsonl and
// rejected/rejected.jsonl under `out_dir`. Samples failing QC are listed as
// rejected; foregrounds without a usable mask are listed as missing.
inline BuildResult buildDataset(const fs::path& fg_dir, const fs::path& mask_dir,
                                const BackgroundPool& pool, const CaptureMetadata& metadata,
                                const CompositeConfig& config, const QcConfig& qc,
                                const fs::path& out_dir, int threads = 1) {
  config.validate();
  qc.validate();
  if (pool.empty()) throw EmptyPoolError();

  std::map<long long, fs::path> masks;
  for (auto& [idx, p] : indexedImages(mask_dir, "gt_")) masks.emplace(idx, std::move(p));
  const auto foregrounds = indexedImages(fg_dir, "fg_");

  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "masks");
  fs::create_directories(out_dir / "rejected");

  struct Outcome {
    std::vector<SampleManifest> samples;
    std::optional<RejectedSample> rejected;
    std::optional<MissingSample> missing;
  };
  std::vector<Outcome> outcomes(foregrounds.size());

  parallelFor(foregrounds.size(), threads, [&](std::size_t i) {
    const auto& [index, fg_path] = foregrounds[i];
    Outcome& out = outcomes[i];
    const std::string fg_name = fg_path.filename().string();
    auto it = masks.find(index);
    if (it == masks.end()) {
      out.missing = MissingSample{index, fg_name, "no mask"};
      return;
    }
    try {
      const RgbImage fg = loadRgb(fg_path);
      const BinaryMask mask = loadMask(it->second);
      if (fg.size() != mask.size() ||
          fg.size() != Size{pool.target_size, pool.target_size}) {
        out.missing = MissingSample{index, fg_name,
                                    "size mismatch (foreground " + fg.size().str() +
                                        ", mask " + mask.size().str() + ", backgrounds " +
                                        std::to_string(pool.target_size) + ")"};
        return;
      }
      const QcVerdict verdict = qcScreen(mask, qc);
      if (!verdict.accepted()) {
        out.rejected = RejectedSample{index, fg_name, verdict.reasons};
        return;
      }
      for (int copy = 0; copy < config.copies; ++copy) {
        const std::size_t bg = assignBackground(config.seed, index, copy, pool.size());
        const std::string id = sampleId(index, copy, config.copies);
        SampleManifest m;
        m.sample_id = id;
        m.image_path = "images/img_" + id + ".png";
        m.mask_path = "masks/gt_" + id + ".png";
        m.background_source = pool.entries[bg].source;
        m.capture = metadata;
        saveRgb(out_dir / m.image_path, composite(fg, mask, pool.entries[bg].image, config));
        saveMask(out_dir / m.mask_path, mask);
        out.samples.push_back(std::move(m));
      }
    } catch (const IoError& e) {
      logger().warn("sample {}: {}", fg_name, e.what());
      out.missing = MissingSample{index, fg_name, e.what()};
    }
  });

  BuildResult result;
  result.input_count = foregrounds.size();
  for (auto& o : outcomes) {
    for (auto& s : o.samples) result.manifest.push_back(std::move(s));
    if (o.rejected) result.rejected.push_back(std::move(*o.rejected));
    if (o.missing) result.missing.push_back(std::move(*o.missing));
  }

  std::ofstream manifest(out_dir / "manifest.jsonl", std::ios::binary);
  for (const auto& m : result.manifest) manifest << toJson(m).dump() << '\n';
  std::ofstream rejected(out_dir / "rejected" / "rejected.jsonl", std::ios::binary);
  for (const auto& r : result.rejected) {
    nlohmann::ordered_json j;
    j["index"] = r.index;
    j["foreground"] = r.foreground;
    j["reasons"] = r.reasons;
    rejected << j.dump() << '\n';
  }
  if (!manifest || !rejected) throw IoError("cannot write dataset listings in " + out_dir.string());
  return result;
}

}  // namespace egoseg
