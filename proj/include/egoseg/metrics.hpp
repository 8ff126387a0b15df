#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egoseg/raster.hpp"
#include "egoseg/resize.hpp"

namespace egoseg {

// Per-pixel tallies of the arm class against groundtruth.
struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;

  long long total() const noexcept { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp; fp += o.fp; fn += o.fn; tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts confusion(const BinaryMask& gt, const BinaryMask& pred) {
  require_same_size(gt.size(), pred.size(), "confusion");
  auto g = gt.labels();
  auto p = pred.labels();
  long long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    tp += g[i] & p[i];
    fp += (g[i] ^ 1) & p[i];
    fn += g[i] & (p[i] ^ 1);
  }
  const auto n = static_cast<long long>(g.size());
  return {tp, fp, fn, n - tp - fp - fn};
}

// Jaccard index of the arm class in percent; empty when neither mask has
// arm pixels.
inline std::optional<double> iouArm(const ConfusionCounts& c) {
  const long long denom = c.tp + c.fp + c.fn;
  if (denom == 0) return std::nullopt;
  return 100.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

// Fraction of groundtruth arm pixels missed, in percent; empty when the
// groundtruth has no arm pixels.
inline std::optional<double> missRate(const ConfusionCounts& c) {
  const long long denom = c.fn + c.tp;
  if (denom == 0) return std::nullopt;
  return 100.0 * static_cast<double>(c.fn) / static_cast<double>(denom);
}

struct MetricRecord {
  std::string sample_id;
  std::string dataset;
  std::string scene;
  ConfusionCounts counts;
  std::optional<double> iou_arm;
  std::optional<double> miss_rate;
};

inline MetricRecord makeRecord(std::string sample_id, const ConfusionCounts& counts,
                               std::string dataset = {}, std::string scene = {}) {
  return {std::move(sample_id), std::move(dataset), std::move(scene), counts,
          iouArm(counts), missRate(counts)};
}

struct MetricSummary {
  std::string dataset_name;
  std::string scene;  // empty for the whole-dataset block
  long long n_samples = 0;
  long long n_undefined = 0;       // records without a defined IoU
  long long n_miss_undefined = 0;  // records without a defined miss rate
  std::optional<double> iou_mean, iou_std;
  std::optional<double> miss_mean, miss_std;
  std::optional<double> iou_micro;
  std::optional<double> miss_micro;
  ConfusionCounts pooled;

  std::string label() const {
    return scene.empty() ? dataset_name : dataset_name + " / " + scene;
  }
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Population statistics (divisor n) of a non-empty sample, two-pass.
inline MeanStd meanStd(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

// Macro statistics over records with defined values, plus micro scores from
// pooled counts. Records are folded in sample_id order.
inline MetricSummary aggregate(std::vector<MetricRecord> records,
                               const std::string& dataset_name,
                               const std::string& scene = {}) {
  if (dataset_name.empty()) throw UsageError("aggregate: dataset name must not be empty");
  if (records.empty()) throw UsageError("aggregate: no records for " + dataset_name);
  std::stable_sort(records.begin(), records.end(),
                   [](const MetricRecord& a, const MetricRecord& b) {
                     return a.sample_id < b.sample_id;
                   });

  MetricSummary s;
  s.dataset_name = dataset_name;
  s.scene = scene;
  s.n_samples = static_cast<long long>(records.size());
  std::vector<double> ious, misses;
  for (const auto& r : records) {
    s.pooled += r.counts;
    if (r.iou_arm) ious.push_back(*r.iou_arm); else ++s.n_undefined;
    if (r.miss_rate) misses.push_back(*r.miss_rate); else ++s.n_miss_undefined;
  }
  if (!ious.empty()) {
    const auto ms = meanStd(ious);
    s.iou_mean = ms.mean;
    s.iou_std = ms.std;
  }
  if (!misses.empty()) {
    const auto ms = meanStd(misses);
    s.miss_mean = ms.mean;
    s.miss_std = ms.std;
  }
  s.iou_micro = iouArm(s.pooled);
  s.miss_micro = missRate(s.pooled);
  return s;
}

// Per-pixel fraction of masks with foreground, after nearest resizing every
// mask to the reference size.
struct Heatmap {
  Size size;
  std::vector<double> occupancy;

  double at(int x, int y) const {
    return occupancy[static_cast<std::size_t>(y) * size.width + x];
  }
};

// Streaming form of `heatmap` for datasets too large to hold in memory.
class HeatmapAccumulator {
 public:
  explicit HeatmapAccumulator(Size reference) : reference_(reference) {
    if (reference.width < 1 || reference.height < 1) {
      throw UsageError("heatmap: reference size must be >= 1x1");
    }
    counts_.assign(reference.area(), 0);
  }

  void add(const BinaryMask& mask) {
    const BinaryMask r = mask.size() == reference_
                             ? mask
                             : resizeNearest(mask, reference_.width, reference_.height);
    auto lbl = r.labels();
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += lbl[i];
    ++n_;
  }

  std::size_t count() const noexcept { return n_; }

  Heatmap result() const {
    if (n_ == 0) throw UsageError("heatmap: no masks given");
    Heatmap out{reference_, std::vector<double>(counts_.size())};
    const double n = static_cast<double>(n_);
    for (std::size_t i = 0; i < counts_.size(); ++i) out.occupancy[i] = counts_[i] / n;
    return out;
  }

 private:
  Size reference_;
  std::vector<std::uint32_t> counts_;
  std::size_t n_ = 0;
};

inline Heatmap heatmap(std::span<const BinaryMask> masks, Size reference) {
  if (masks.empty()) throw UsageError("heatmap: no masks given");
  HeatmapAccumulator acc(reference);
  for (const auto& m : masks) acc.add(m);
  return acc.result();
}

// 16-bit encoding: round-half-up(occupancy * 65535).
inline Raster<std::uint16_t> encodeHeatmap(const Heatmap& map) {
  Raster<std::uint16_t> out(map.size);
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double v = std::clamp(map.occupancy[i], 0.0, 1.0) * 65535.0;
    dst[i] = static_cast<std::uint16_t>(std::floor(v + 0.5));
  }
  return out;
}

}  // namespace egoseg
