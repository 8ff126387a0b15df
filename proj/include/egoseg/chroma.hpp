#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egoseg/color.hpp"
#include "egoseg/morphology.hpp"
#include "egoseg/raster.hpp"

namespace egoseg {

// inside: pixels with h1 <= H <= h2 and S >= s1 are backdrop, the arm is
//         everything else.
// outside: the arm is (H <= h1 or H >= h2) and S >= s1.
enum class BandMode { inside, outside };

inline std::string_view to_string(BandMode mode) {
  return mode == BandMode::inside ? "inside" : "outside";
}

inline BandMode parseBandMode(std::string_view text) {
  if (text == "inside" || text == "inside-band") return BandMode::inside;
  if (text == "outside" || text == "outside-band") return BandMode::outside;
  throw UsageError("unknown band mode '" + std::string(text) + "'");
}

struct ChromaThresholds {
  double h1 = 0.22;
  double h2 = 0.45;
  double s1 = 0.20;
  BandMode band_mode = BandMode::inside;

  void validate() const {
    if (!(0.0 <= h1 && h1 < h2 && h2 <= 1.0)) {
      throw UsageError("chroma thresholds need 0 <= h1 < h2 <= 1");
    }
    if (!(0.0 <= s1 && s1 <= 1.0)) throw UsageError("chroma s1 must lie in [0, 1]");
  }

  // True when the pixel belongs to the arm.
  bool is_foreground(const HsvPixel& hsv) const noexcept {
    if (band_mode == BandMode::inside) {
      const bool backdrop = hsv.h >= h1 && hsv.h <= h2 && hsv.s >= s1;
      return !backdrop;
    }
    return (hsv.h <= h1 || hsv.h >= h2) && hsv.s >= s1;
  }
};

// Indices 0, stride, 2*stride, ... below frame_count.
inline std::vector<std::size_t> selectFrames(std::size_t frame_count, std::size_t stride) {
  if (stride == 0) throw UsageError("stride must be >= 1");
  std::vector<std::size_t> out;
  out.reserve(frame_count / stride + 1);
  for (std::size_t i = 0; i < frame_count; i += stride) out.push_back(i);
  return out;
}

inline BinaryMask chromaMask(const RgbImage& image, const ChromaThresholds& thresholds) {
  thresholds.validate();
  BinaryMask mask(image.size());
  auto src = image.pixels();
  auto dst = mask.labels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(thresholds.is_foreground(rgbToHsv(src[i])));
  }
  return mask;
}

inline BinaryMask extractGroundtruth(const RgbImage& image,
                                     const ChromaThresholds& thresholds,
                                     const MorphConfig& morph) {
  return morphClean(chromaMask(image, thresholds), morph);
}

// Keeps source pixels under the foreground, blacks out the rest.
inline RgbImage maskForeground(const RgbImage& image, const BinaryMask& mask) {
  require_same_size(image.size(), mask.size(), "maskForeground");
  RgbImage out(image.size());
  auto src = image.pixels();
  auto lbl = mask.labels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = lbl[i] ? src[i] : Rgb{};
  return out;
}

// Parses the numeric index out of names like "frame_000123.png",
// "gt_000123.png" or "fg_000123.png": the digits after the last underscore.
inline std::optional<long long> parseFrameIndex(std::string_view stem) {
  const auto pos = stem.rfind('_');
  const std::string_view digits = pos == std::string_view::npos ? stem : stem.substr(pos + 1);
  if (digits.empty()) return std::nullopt;
  long long value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

inline std::string formatIndex(long long index, int width = 6) {
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return digits;
}

}  // namespace egoseg
