#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egoseg/error.hpp"

namespace egoseg {

struct Size {
  int width = 0;
  int height = 0;

  std::size_t area() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::string str() const {
    return std::to_string(width) + "x" + std::to_string(height);
  }
  friend bool operator==(const Size&, const Size&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Dense row-major raster. Dimensions are at least 1x1 and the pixel count
// always equals width * height.
template <typename Pixel>
class Raster {
 public:
  using value_type = Pixel;

  Raster(int width, int height, Pixel fill = Pixel{})
      : size_{width, height} {
    if (width < 1 || height < 1) {
      throw UsageError("raster dimensions must be >= 1, got " + size_.str());
    }
    data_.assign(size_.area(), fill);
  }
  explicit Raster(Size size, Pixel fill = Pixel{})
      : Raster(size.width, size.height, fill) {}

  Raster(int width, int height, std::vector<Pixel> data)
      : size_{width, height}, data_(std::move(data)) {
    if (width < 1 || height < 1) {
      throw UsageError("raster dimensions must be >= 1, got " + size_.str());
    }
    if (data_.size() != size_.area()) {
      throw UsageError("pixel count " + std::to_string(data_.size()) +
                       " does not match " + size_.str());
    }
  }

  int width() const noexcept { return size_.width; }
  int height() const noexcept { return size_.height; }
  Size size() const noexcept { return size_; }
  std::size_t pixel_count() const noexcept { return data_.size(); }

  const Pixel& at(int x, int y) const { return data_[index(x, y)]; }
  Pixel& at(int x, int y) { return data_[index(x, y)]; }

  std::span<const Pixel> pixels() const noexcept { return data_; }
  std::span<Pixel> pixels() noexcept { return data_; }
  std::span<const Pixel> row(int y) const noexcept {
    return std::span<const Pixel>(data_).subspan(
        static_cast<std::size_t>(y) * size_.width, size_.width);
  }
  std::span<Pixel> row(int y) noexcept {
    return std::span<Pixel>(data_).subspan(
        static_cast<std::size_t>(y) * size_.width, size_.width);
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < size_.width && y < size_.height;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * size_.width + x;
  }

  Size size_;
  std::vector<Pixel> data_;
};

using RgbImage = Raster<Rgb>;

// Range image in millimeters; 0 marks a missing measurement.
using DepthImage = Raster<std::uint16_t>;

inline constexpr std::uint16_t kMissingDepth = 0;

// Two-class label raster: 1 = arm (foreground), 0 = background. Stored as
// bytes so per-pixel loops vectorize; every stored value is 0 or 1.
class BinaryMask {
 public:
  BinaryMask(int width, int height, bool fill = false)
      : labels_(width, height, static_cast<std::uint8_t>(fill ? 1 : 0)) {}
  explicit BinaryMask(Size size, bool fill = false)
      : BinaryMask(size.width, size.height, fill) {}

  // Any non-zero byte becomes foreground.
  static BinaryMask from_bytes(int width, int height,
                               std::span<const std::uint8_t> bytes) {
    BinaryMask mask(width, height);
    if (bytes.size() != mask.pixel_count()) {
      throw UsageError("label count " + std::to_string(bytes.size()) +
                       " does not match " + mask.size().str());
    }
    std::transform(bytes.begin(), bytes.end(), mask.labels_.pixels().begin(),
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v != 0); });
    return mask;
  }

  int width() const noexcept { return labels_.width(); }
  int height() const noexcept { return labels_.height(); }
  Size size() const noexcept { return labels_.size(); }
  std::size_t pixel_count() const noexcept { return labels_.pixel_count(); }

  bool at(int x, int y) const { return labels_.at(x, y) != 0; }
  void set(int x, int y, bool fg) {
    labels_.at(x, y) = static_cast<std::uint8_t>(fg ? 1 : 0);
  }
  bool contains(int x, int y) const noexcept { return labels_.contains(x, y); }

  // Raw 0/1 bytes. Writers must keep every value in {0, 1}.
  std::span<const std::uint8_t> labels() const noexcept { return labels_.pixels(); }
  std::span<std::uint8_t> labels() noexcept { return labels_.pixels(); }
  std::span<const std::uint8_t> row(int y) const noexcept { return labels_.row(y); }
  std::span<std::uint8_t> row(int y) noexcept { return labels_.row(y); }

  std::size_t foreground_count() const noexcept {
    std::size_t n = 0;
    for (std::uint8_t v : labels_.pixels()) n += v;
    return n;
  }
  bool empty() const noexcept { return foreground_count() == 0; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  Raster<std::uint8_t> labels_;
};

inline void require_same_size(Size a, Size b, const char* what) {
  if (a != b) {
    throw UsageError(std::string(what) + ": dimension mismatch (" + a.str() +
                     " vs " + b.str() + ")");
  }
}

}  // namespace egoseg
