#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "egoseg/color.hpp"
#include "egoseg/image_io.hpp"
#include "egoseg/morphology.hpp"
#include "egoseg/raster.hpp"
#include "egoseg/resize.hpp"

namespace egoseg {

struct HueRange {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const HueRange&, const HueRange&) = default;
};

// Skin-color HSV band. A wrapping hue band (e.g. magenta-red-orange) is
// written as two ranges split at 0.
struct SkinBand {
  std::vector<HueRange> hue_ranges{{0.00, 0.14}};
  double s_min = 0.15;
  double s_max = 0.90;
  double v_min = 0.20;

  void validate() const {
    if (hue_ranges.empty()) throw UsageError("skin band needs at least one hue range");
    for (const auto& r : hue_ranges) {
      if (!(0.0 <= r.lo && r.lo <= r.hi && r.hi <= 1.0)) {
        throw UsageError("skin hue ranges need 0 <= lo <= hi <= 1");
      }
    }
    if (!(0.0 <= s_min && s_min <= s_max && s_max <= 1.0)) {
      throw UsageError("skin band needs 0 <= s_min <= s_max <= 1");
    }
    if (!(0.0 <= v_min && v_min <= 1.0)) throw UsageError("skin v_min must lie in [0, 1]");
  }

  bool contains(const HsvPixel& hsv) const noexcept {
    if (hsv.s < s_min || hsv.s > s_max || hsv.v < v_min) return false;
    for (const auto& r : hue_ranges) {
      if (hsv.h >= r.lo && hsv.h <= r.hi) return true;
    }
    return false;
  }
};

// Millimeter interval; `fill_holes` closes the result with a radius-2 disk.
struct DepthBand {
  int d_min = 100;
  int d_max = 400;
  bool fill_holes = true;

  void validate() const {
    if (!(0 < d_min && d_min < d_max && d_max <= 65535)) {
      throw UsageError("depth band needs 0 < d_min < d_max <= 65535");
    }
  }
};

inline constexpr int kDepthFillRadius = 2;

inline BinaryMask skinSegment(const RgbImage& image, const SkinBand& band) {
  band.validate();
  BinaryMask mask(image.size());
  auto src = image.pixels();
  auto dst = mask.labels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(band.contains(rgbToHsv(src[i])));
  }
  return mask;
}

inline BinaryMask depthSegment(const DepthImage& depth, const DepthBand& band) {
  band.validate();
  BinaryMask mask(depth.size());
  auto src = depth.pixels();
  auto dst = mask.labels();
  const auto lo = static_cast<std::uint16_t>(band.d_min);
  const auto hi = static_cast<std::uint16_t>(band.d_max);
  for (std::size_t i = 0; i < src.size(); ++i) {
    // d_min > 0, so missing (0) never passes.
    dst[i] = static_cast<std::uint8_t>(src[i] >= lo && src[i] <= hi);
  }
  if (band.fill_holes) return closing(mask, kDepthFillRadius);
  return mask;
}

// Reads a third-party prediction mask. Sizes must match the groundtruth
// unless `resize_to_fit`, in which case it is nearest-neighbor resized.
inline BinaryMask loadPredictionMask(const std::filesystem::path& path, Size expected,
                                     bool resize_to_fit) {
  BinaryMask mask = loadMask(path);
  if (mask.size() == expected) return mask;
  if (!resize_to_fit) {
    throw UsageError(path.string() + ": prediction is " + mask.size().str() +
                     " but groundtruth is " + expected.str() +
                     " (pass --resize-pred to resample)");
  }
  return resizeNearest(mask, expected.width, expected.height);
}

}  // namespace egoseg
