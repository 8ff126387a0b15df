#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "egoseg/raster.hpp"

namespace egoseg {

enum class ResizeMode { nearest, bilinear };

namespace detail {

inline void require_target(int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) {
    throw UsageError("resize target must be >= 1x1, got " + std::to_string(target_w) +
                     "x" + std::to_string(target_h));
  }
}

// Pixel-center nearest source index in exact integer arithmetic:
// floor((dst + 0.5) * src_len / dst_len).
inline std::vector<int> nearest_lut(int src_len, int dst_len) {
  std::vector<int> lut(dst_len);
  for (int i = 0; i < dst_len; ++i) {
    const long long num = (2LL * i + 1) * src_len;
    lut[i] = static_cast<int>(num / (2LL * dst_len));
  }
  return lut;
}

struct BilinearTap {
  int i0 = 0, i1 = 0;
  double frac = 0.0;
};

// Half-pixel aligned sample positions, clamped to the source edge.
inline std::vector<BilinearTap> bilinear_taps(int src_len, int dst_len) {
  std::vector<BilinearTap> taps(dst_len);
  const double scale = static_cast<double>(src_len) / dst_len;
  for (int i = 0; i < dst_len; ++i) {
    double pos = (i + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src_len - 1));
    const int i0 = static_cast<int>(std::floor(pos));
    taps[i] = {i0, std::min(i0 + 1, src_len - 1), pos - i0};
  }
  return taps;
}

}  // namespace detail

template <typename Pixel>
Raster<Pixel> resizeNearest(const Raster<Pixel>& src, int target_w, int target_h) {
  detail::require_target(target_w, target_h);
  const auto xs = detail::nearest_lut(src.width(), target_w);
  const auto ys = detail::nearest_lut(src.height(), target_h);
  Raster<Pixel> out(target_w, target_h);
  for (int y = 0; y < target_h; ++y) {
    auto srow = src.row(ys[y]);
    auto drow = out.row(y);
    for (int x = 0; x < target_w; ++x) drow[x] = srow[xs[x]];
  }
  return out;
}

inline BinaryMask resizeNearest(const BinaryMask& src, int target_w, int target_h) {
  detail::require_target(target_w, target_h);
  const auto xs = detail::nearest_lut(src.width(), target_w);
  const auto ys = detail::nearest_lut(src.height(), target_h);
  BinaryMask out(target_w, target_h);
  for (int y = 0; y < target_h; ++y) {
    auto srow = src.row(ys[y]);
    auto drow = out.row(y);
    for (int x = 0; x < target_w; ++x) drow[x] = srow[xs[x]];
  }
  return out;
}

inline RgbImage resizeBilinear(const RgbImage& src, int target_w, int target_h) {
  detail::require_target(target_w, target_h);
  const auto xs = detail::bilinear_taps(src.width(), target_w);
  const auto ys = detail::bilinear_taps(src.height(), target_h);
  RgbImage out(target_w, target_h);
  auto lerp_channel = [](double a, double b, double c, double d, double fx, double fy) {
    const double top = a * (1.0 - fx) + b * fx;
    const double bottom = c * (1.0 - fx) + d * fx;
    const double v = top * (1.0 - fy) + bottom * fy;
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  };
  for (int y = 0; y < target_h; ++y) {
    const auto& ty = ys[y];
    auto r0 = src.row(ty.i0);
    auto r1 = src.row(ty.i1);
    auto drow = out.row(y);
    for (int x = 0; x < target_w; ++x) {
      const auto& tx = xs[x];
      const Rgb a = r0[tx.i0], b = r0[tx.i1], c = r1[tx.i0], d = r1[tx.i1];
      drow[x] = {lerp_channel(a.r, b.r, c.r, d.r, tx.frac, ty.frac),
                 lerp_channel(a.g, b.g, c.g, d.g, tx.frac, ty.frac),
                 lerp_channel(a.b, b.b, c.b, d.b, tx.frac, ty.frac)};
    }
  }
  return out;
}

inline RgbImage resizeImage(const RgbImage& image, int target_w, int target_h,
                            ResizeMode mode) {
  detail::require_target(target_w, target_h);
  if (image.width() == target_w && image.height() == target_h) return image;
  return mode == ResizeMode::nearest ? resizeNearest(image, target_w, target_h)
                                     : resizeBilinear(image, target_w, target_h);
}

}  // namespace egoseg
