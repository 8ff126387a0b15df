#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoseg/config.hpp"
#include "egoseg/log.hpp"
#include "egoseg/segmenters.hpp"

namespace egoseg {

// Per-image segmentation latency, single-threaded, warm-up runs excluded.
// Depth timings cover the band threshold (and hole filling when enabled),
// not the generation of the depth map itself.
struct BenchResult {
  SegmenterKind kind = SegmenterKind::skin;
  Size size;
  int iterations = 0;
  int warmup = 0;
  int threads = 1;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p95_us = 0.0;
  double min_us = 0.0;
  double max_us = 0.0;
};

// Half the frame in skin-like tones, half in arbitrary colors.
inline RgbImage syntheticBenchImage(Size size) {
  std::mt19937_64 engine(0xE60A2Aull);
  RgbImage img(size);
  for (int y = 0; y < size.height; ++y) {
    auto row = img.row(y);
    for (int x = 0; x < size.width; ++x) {
      const std::uint64_t r = engine();
      if (x < size.width / 2) {
        row[x] = {static_cast<std::uint8_t>(180 + (r & 0x3F)),
                  static_cast<std::uint8_t>(120 + ((r >> 8) & 0x3F)),
                  static_cast<std::uint8_t>(80 + ((r >> 16) & 0x3F))};
      } else {
        row[x] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(r >> 8),
                  static_cast<std::uint8_t>(r >> 16)};
      }
    }
  }
  return img;
}

// Ranges 0..1023 mm with roughly 5% missing pixels.
inline DepthImage syntheticBenchDepth(Size size) {
  std::mt19937_64 engine(0xDE97ull);
  DepthImage depth(size);
  for (auto& d : depth.pixels()) {
    const std::uint64_t r = engine();
    d = (r % 100) < 5 ? kMissingDepth : static_cast<std::uint16_t>((r >> 8) % 1024);
  }
  return depth;
}

// Nearest-rank percentile of sorted samples.
inline double percentile(const std::vector<double>& sorted, double pct) {
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

inline BenchResult runBench(const BenchConfig& bench, const SegmenterConfig& segmenter) {
  if (bench.iterations < 10) throw UsageError("bench iterations must be >= 10");
  if (bench.kind == SegmenterKind::external) {
    throw UsageError("bench: external segmenters run outside this tool");
  }
  BenchResult result;
  result.kind = bench.kind;
  result.size = bench.size;
  result.iterations = bench.iterations;
  result.warmup = bench.warmup;

  std::vector<double> samples;
  samples.reserve(bench.iterations);
  std::size_t sink = 0;  // keeps the work observable

  auto time_runs = [&](auto&& segment) {
    for (int i = 0; i < bench.warmup; ++i) sink += segment().foreground_count();
    for (int i = 0; i < bench.iterations; ++i) {
      const auto start = std::chrono::steady_clock::now();
      const BinaryMask mask = segment();
      const auto stop = std::chrono::steady_clock::now();
      sink += mask.labels()[0];
      samples.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
    }
  };
  if (bench.kind == SegmenterKind::skin) {
    const RgbImage img = syntheticBenchImage(bench.size);
    time_runs([&] { return skinSegment(img, segmenter.skin); });
  } else {
    const DepthImage depth = syntheticBenchDepth(bench.size);
    time_runs([&] { return depthSegment(depth, segmenter.depth); });
  }
  logger().trace("bench sink {}", sink);

  std::sort(samples.begin(), samples.end());
  double sum = 0.0;
  for (double s : samples) sum += s;
  result.mean_us = sum / static_cast<double>(samples.size());
  const auto n = samples.size();
  result.median_us = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  result.p95_us = percentile(samples, 95.0);
  result.min_us = samples.front();
  result.max_us = samples.back();
  return result;
}

inline nlohmann::ordered_json toJson(const BenchResult& r) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(r.kind));
  j["width"] = r.size.width;
  j["height"] = r.size.height;
  j["iterations"] = r.iterations;
  j["warmup"] = r.warmup;
  j["threads"] = r.threads;
  j["mean_us"] = r.mean_us;
  j["median_us"] = r.median_us;
  j["p95_us"] = r.p95_us;
  j["min_us"] = r.min_us;
  j["max_us"] = r.max_us;
  return j;
}

}  // namespace egoseg
