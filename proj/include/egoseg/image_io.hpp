#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "egoseg/raster.hpp"

// Raster file formats:
//   RGB images  8-bit, 3 channels (PNG or JPEG; a 4th alpha channel is dropped)
//   masks       8-bit, 1 channel PNG; written as 0/255, read with >= 128 -> fg
//   depth       16-bit, 1 channel PNG, millimeters, 0 = missing
//   heatmaps    16-bit, 1 channel PNG, round-half-up(occupancy * 65535)

namespace egoseg {

namespace fs = std::filesystem;

inline constexpr std::uint8_t kMaskThreshold = 128;

struct RasterInfo {
  Size size;
  int channels = 0;
  int bit_depth = 0;
};

namespace detail {

inline cv::Mat decode(const fs::path& path) {
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode " + path.string() + ": " + e.what());
  }
  if (mat.empty()) throw IoError("cannot read image " + path.string());
  return mat;
}

inline int bit_depth_of(const cv::Mat& m) {
  switch (m.depth()) {
    case CV_8U: case CV_8S: return 8;
    case CV_16U: case CV_16S: return 16;
    default: return 32;
  }
}

inline void encode(const fs::path& path, const cv::Mat& mat) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

inline std::string describe(const RasterInfo& info) {
  return info.size.str() + ", " + std::to_string(info.channels) + " channel(s), " +
         std::to_string(info.bit_depth) + "-bit";
}

}  // namespace detail

inline RasterInfo probeRaster(const fs::path& path) {
  const cv::Mat m = detail::decode(path);
  return {{m.cols, m.rows}, m.channels(), detail::bit_depth_of(m)};
}

inline RgbImage loadRgb(const fs::path& path) {
  const cv::Mat m = detail::decode(path);
  const RasterInfo info{{m.cols, m.rows}, m.channels(), detail::bit_depth_of(m)};
  if (m.depth() != CV_8U || (m.channels() != 3 && m.channels() != 4)) {
    throw FormatError(path.string() + ": expected 8-bit RGB image, got " +
                      detail::describe(info));
  }
  RgbImage img(m.cols, m.rows);
  const int step = m.channels();
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* src = m.ptr<std::uint8_t>(y);
    auto dst = img.row(y);
    for (int x = 0; x < m.cols; ++x) {
      const std::uint8_t* p = src + static_cast<std::ptrdiff_t>(x) * step;
      dst[x] = {p[2], p[1], p[0]};  // OpenCV stores BGR(A)
    }
  }
  return img;
}

inline void saveRgb(const fs::path& path, const RgbImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    std::uint8_t* dst = m.ptr<std::uint8_t>(y);
    auto src = img.row(y);
    for (int x = 0; x < img.width(); ++x) {
      dst[3 * x + 0] = src[x].b;
      dst[3 * x + 1] = src[x].g;
      dst[3 * x + 2] = src[x].r;
    }
  }
  detail::encode(path, m);
}

inline BinaryMask loadMask(const fs::path& path) {
  const cv::Mat m = detail::decode(path);
  if (m.depth() != CV_8U || m.channels() != 1) {
    throw FormatError(path.string() + ": expected single-channel 8-bit mask, got " +
                      detail::describe({{m.cols, m.rows}, m.channels(),
                                        detail::bit_depth_of(m)}));
  }
  BinaryMask mask(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* src = m.ptr<std::uint8_t>(y);
    auto dst = mask.row(y);
    for (int x = 0; x < m.cols; ++x) {
      dst[x] = static_cast<std::uint8_t>(src[x] >= kMaskThreshold);
    }
  }
  return mask;
}

inline void saveMask(const fs::path& path, const BinaryMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    std::uint8_t* dst = m.ptr<std::uint8_t>(y);
    auto src = mask.row(y);
    for (int x = 0; x < mask.width(); ++x) dst[x] = src[x] ? 255 : 0;
  }
  detail::encode(path, m);
}

// Raw 8-bit single-channel raster, written as-is (no 0/255 mapping).
inline void saveGray8(const fs::path& path, const Raster<std::uint8_t>& raster) {
  cv::Mat m(raster.height(), raster.width(), CV_8UC1);
  for (int y = 0; y < raster.height(); ++y) {
    std::uint8_t* dst = m.ptr<std::uint8_t>(y);
    auto src = raster.row(y);
    for (int x = 0; x < raster.width(); ++x) dst[x] = src[x];
  }
  detail::encode(path, m);
}

inline Raster<std::uint16_t> loadGray16(const fs::path& path) {
  const cv::Mat m = detail::decode(path);
  if (m.depth() != CV_16U || m.channels() != 1) {
    throw FormatError(path.string() + ": expected single-channel 16-bit image, got " +
                      detail::describe({{m.cols, m.rows}, m.channels(),
                                        detail::bit_depth_of(m)}));
  }
  Raster<std::uint16_t> out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint16_t* src = m.ptr<std::uint16_t>(y);
    auto dst = out.row(y);
    for (int x = 0; x < m.cols; ++x) dst[x] = src[x];
  }
  return out;
}

inline DepthImage loadDepth(const fs::path& path) {
  return loadGray16(path);
}

inline void saveGray16(const fs::path& path, const Raster<std::uint16_t>& raster) {
  cv::Mat m(raster.height(), raster.width(), CV_16UC1);
  for (int y = 0; y < raster.height(); ++y) {
    std::uint16_t* dst = m.ptr<std::uint16_t>(y);
    auto src = raster.row(y);
    for (int x = 0; x < raster.width(); ++x) dst[x] = src[x];
  }
  detail::encode(path, m);
}

inline void saveDepth(const fs::path& path, const DepthImage& depth) {
  saveGray16(path, depth);
}

inline bool isImageFile(const fs::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// Regular image files in `dir`, sorted lexicographically by file name.
inline std::vector<fs::path> listImages(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && isImageFile(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

}  // namespace egoseg
