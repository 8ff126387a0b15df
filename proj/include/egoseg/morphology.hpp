#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "egoseg/raster.hpp"

namespace egoseg {

// Reference frame side for which `min_component_area` is tuned.
inline constexpr int kReferenceSide = 720;

struct MorphConfig {
  int open_radius = 1;
  int close_radius = 2;
  long long min_component_area = 64;

  // Rescales the area threshold by (w*h) / 720^2 so the same physical
  // speck size is removed at other resolutions.
  MorphConfig scaled_for(Size size) const {
    MorphConfig out = *this;
    const double ratio = static_cast<double>(size.area()) /
                         (static_cast<double>(kReferenceSide) * kReferenceSide);
    out.min_component_area = std::llround(static_cast<double>(min_component_area) * ratio);
    return out;
  }

  void validate() const {
    if (open_radius < 0 || close_radius < 0 || min_component_area < 0) {
      throw UsageError("morphology parameters must be >= 0");
    }
  }
};

namespace detail {

// Half-width of the discrete disk at vertical offset dy. The disk holds the
// pixel centers strictly inside a circle of radius r + 1/2, i.e. offsets with
// dx^2 + dy^2 <= r(r + 1): radius 1 is the 3x3 block, radius 2 the 5x5 block
// without its corners.
inline int disk_half_width(int radius, int dy) {
  const int limit = radius * (radius + 1);
  int w = 0;
  while ((w + 1) * (w + 1) + dy * dy <= limit) ++w;
  return w;
}

// Horizontal run filter of half-width w. Dilation ORs the in-bounds window,
// erosion ANDs it; out-of-image pixels never participate.
template <bool Dilate>
inline void horizontal_pass(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                            int w) {
  const int n = static_cast<int>(in.size());
  for (int x = 0; x < n; ++x) out[x] = in[x];
  for (int k = 1; k <= w; ++k) {
    for (int x = 0; x + k < n; ++x) {
      if constexpr (Dilate) out[x] |= in[x + k]; else out[x] &= in[x + k];
    }
    for (int x = k; x < n; ++x) {
      if constexpr (Dilate) out[x] |= in[x - k]; else out[x] &= in[x - k];
    }
  }
}

// Disk-shaped dilation or erosion, decomposed into per-row horizontal runs.
template <bool Dilate>
inline BinaryMask disk_filter(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const int width = mask.width();
  const int height = mask.height();

  std::vector<int> half_width(2 * radius + 1);
  std::map<int, BinaryMask> runs;
  for (int dy = -radius; dy <= radius; ++dy) {
    const int w = disk_half_width(radius, dy);
    half_width[dy + radius] = w;
    if (runs.contains(w)) continue;
    BinaryMask pass(width, height);
    for (int y = 0; y < height; ++y) {
      horizontal_pass<Dilate>(mask.row(y), pass.row(y), w);
    }
    runs.emplace(w, std::move(pass));
  }

  BinaryMask out(width, height, !Dilate);
  for (int y = 0; y < height; ++y) {
    auto dst = out.row(y);
    for (int dy = -radius; dy <= radius; ++dy) {
      const int sy = y + dy;
      if (sy < 0 || sy >= height) continue;
      auto src = runs.at(half_width[dy + radius]).row(sy);
      for (int x = 0; x < width; ++x) {
        if constexpr (Dilate) dst[x] |= src[x]; else dst[x] &= src[x];
      }
    }
  }
  return out;
}

}  // namespace detail

inline BinaryMask dilate(const BinaryMask& mask, int radius) {
  return detail::disk_filter<true>(mask, radius);
}

inline BinaryMask erode(const BinaryMask& mask, int radius) {
  return detail::disk_filter<false>(mask, radius);
}

inline BinaryMask opening(const BinaryMask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

inline BinaryMask closing(const BinaryMask& mask, int radius) {
  return erode(dilate(mask, radius), radius);
}

struct BoundingBox {
  int x_min = 0, y_min = 0, x_max = 0, y_max = 0;  // inclusive
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Component {
  int label = 0;  // 1-based, in raster order of each component's first pixel
  long long area = 0;
  BoundingBox box;
};

struct ComponentLabels {
  Raster<std::int32_t> labels;  // 0 = background
  std::vector<Component> components;
};

// 8-connected foreground labeling.
inline ComponentLabels labelComponents(const BinaryMask& mask) {
  const int width = mask.width();
  const int height = mask.height();
  ComponentLabels out{Raster<std::int32_t>(width, height, 0), {}};
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!mask.at(x, y) || out.labels.at(x, y) != 0) continue;
      Component comp;
      comp.label = static_cast<int>(out.components.size()) + 1;
      comp.box = {x, y, x, y};
      out.labels.at(x, y) = comp.label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++comp.area;
        comp.box.x_min = std::min(comp.box.x_min, cx);
        comp.box.x_max = std::max(comp.box.x_max, cx);
        comp.box.y_min = std::min(comp.box.y_min, cy);
        comp.box.y_max = std::max(comp.box.y_max, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (!mask.contains(nx, ny) || !mask.at(nx, ny)) continue;
            if (out.labels.at(nx, ny) != 0) continue;
            out.labels.at(nx, ny) = comp.label;
            stack.emplace_back(nx, ny);
          }
        }
      }
      out.components.push_back(comp);
    }
  }
  return out;
}

inline std::vector<Component> connectedComponents(const BinaryMask& mask) {
  return labelComponents(mask).components;
}

inline BinaryMask removeSmallComponents(const BinaryMask& mask, long long min_area) {
  if (min_area <= 0) return mask;
  const ComponentLabels cc = labelComponents(mask);
  BinaryMask out(mask.size());
  auto dst = out.labels();
  auto lbl = cc.labels.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const int l = lbl[i];
    dst[i] = static_cast<std::uint8_t>(l != 0 && cc.components[l - 1].area >= min_area);
  }
  return out;
}

// Opening, then closing, then removal of components smaller than the
// configured area. A zero radius or area disables that stage.
inline BinaryMask morphClean(const BinaryMask& mask, const MorphConfig& config) {
  config.validate();
  BinaryMask out = opening(mask, config.open_radius);
  out = closing(out, config.close_radius);
  return removeSmallComponents(out, config.min_component_area);
}

}  // namespace egoseg
