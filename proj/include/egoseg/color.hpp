#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "egoseg/raster.hpp"

namespace egoseg {

// Hexcone HSV with every component on [0, 1]. Hue wraps around; red is 0.
struct HsvPixel {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

// Achromatic inputs (max == min) map to h = 0, s = 0.
inline HsvPixel rgbToHsv(Rgb px) noexcept {
  const int r = px.r, g = px.g, b = px.b;
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  const int delta = hi - lo;

  HsvPixel out;
  out.v = hi / 255.0;
  if (delta == 0) return out;

  out.s = static_cast<double>(delta) / hi;
  // One division of exact integers, so the hue is correctly rounded and a
  // pixel sitting on a rational threshold such as 0.1 compares consistently.
  int num;
  if (hi == r) {
    num = g - b;
    if (num < 0) num += 6 * delta;
  } else if (hi == g) {
    num = b - r + 2 * delta;
  } else {
    num = r - g + 4 * delta;
  }
  out.h = static_cast<double>(num) / (6 * delta);
  if (out.h >= 1.0) out.h -= 1.0;
  return out;
}

// Inverse hexcone conversion, rounding each channel to the nearest byte.
inline Rgb hsvToRgb(HsvPixel hsv) noexcept {
  const double h = hsv.h - std::floor(hsv.h);
  const double s = std::clamp(hsv.s, 0.0, 1.0);
  const double v = std::clamp(hsv.v, 0.0, 1.0);

  const double sector = h * 6.0;
  const int i = static_cast<int>(sector) % 6;
  const double f = sector - std::floor(sector);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));

  double r = 0, g = 0, b = 0;
  switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  auto to_byte = [](double c) {
    return static_cast<std::uint8_t>(std::lround(c * 255.0));
  };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

}  // namespace egoseg
