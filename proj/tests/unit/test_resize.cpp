#include <gtest/gtest.h>

#include <random>

#include "egoseg/resize.hpp"
#include "support/oracles.hpp"

using namespace egoseg;

namespace {

RgbImage grayImage(int w, int h, auto&& value) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto v = static_cast<std::uint8_t>(value(x, y));
      img.at(x, y) = {v, v, v};
    }
  }
  return img;
}

}  // namespace

TEST(Resize, IdentityKeepsPixels) {
  std::mt19937_64 rng(1);
  const auto img = oracle::randomImage(rng, 720, 720);
  EXPECT_EQ(resizeImage(img, 720, 720, ResizeMode::nearest), img);
  EXPECT_EQ(resizeImage(img, 720, 720, ResizeMode::bilinear), img);
}

TEST(Resize, CheckerboardNearestUpscale) {
  const auto img = grayImage(2, 2, [](int x, int y) { return (x + y) % 2 ? 255 : 0; });
  const auto out = resizeImage(img, 4, 4, ResizeMode::nearest);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_EQ(out.at(x, y), img.at(x / 2, y / 2));
  }
}

// Pinned from the per-pixel sampling script in tests/oracles.
TEST(Resize, BilinearGradientMatchesOracle) {
  const auto img = grayImage(4, 4, [](int x, int y) { return 16 * y + 4 * x; });
  const auto out = resizeImage(img, 2, 2, ResizeMode::bilinear);
  const int want[2][2] = {{10, 18}, {42, 50}};
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) {
      EXPECT_EQ(out.at(x, y).r, want[y][x]);
      EXPECT_EQ(out.at(x, y).g, want[y][x]);
      EXPECT_EQ(out.at(x, y).b, want[y][x]);
    }
  }
}

TEST(Resize, BilinearNonIntegerScaleMatchesOracle) {
  const auto img = grayImage(3, 3, [](int x, int y) { return 10 * y * y + 7 * x; });
  const auto out = resizeImage(img, 2, 2, ResizeMode::bilinear);
  const int want[2][2] = {{4, 15}, {34, 45}};
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) EXPECT_EQ(out.at(x, y).r, want[y][x]);
  }
}

TEST(Resize, BilinearOfConstantIsConstant) {
  const RgbImage img(37, 23, Rgb{12, 200, 99});
  const auto out = resizeImage(img, 101, 7, ResizeMode::bilinear);
  for (const auto& px : out.pixels()) EXPECT_EQ(px, (Rgb{12, 200, 99}));
}

TEST(Resize, NearestIntegerScaleFillsBlocks) {
  std::mt19937_64 rng(2);
  for (int k = 1; k <= 4; ++k) {
    const auto img = oracle::randomImage(rng, 7, 5);
    const auto out = resizeImage(img, 7 * k, 5 * k, ResizeMode::nearest);
    for (int y = 0; y < 5 * k; ++y) {
      for (int x = 0; x < 7 * k; ++x) ASSERT_EQ(out.at(x, y), img.at(x / k, y / k));
    }
  }
}

TEST(Resize, NearestDownscalePicksPixelCenters) {
  const auto lut = detail::nearest_lut(6, 4);
  EXPECT_EQ(lut, (std::vector<int>{0, 2, 3, 5}));
  EXPECT_EQ(detail::nearest_lut(720, 360).front(), 1);
}

TEST(Resize, MaskNearestIntegerScale) {
  std::mt19937_64 rng(3);
  const auto m = oracle::randomMask(rng, 9, 4, 0.5);
  const auto out = resizeNearest(m, 27, 12);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 27; ++x) ASSERT_EQ(out.at(x, y), m.at(x / 3, y / 3));
  }
}

TEST(Resize, ZeroTargetRejected) {
  const RgbImage img(4, 4);
  EXPECT_THROW(resizeImage(img, 0, 4, ResizeMode::nearest), UsageError);
  EXPECT_THROW(resizeImage(img, 4, 0, ResizeMode::bilinear), UsageError);
  EXPECT_THROW(resizeNearest(BinaryMask(2, 2), 0, 0), UsageError);
}
