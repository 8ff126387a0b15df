#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "egoseg/image_io.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace egoseg;
using egoseg::testing::TempDir;

TEST(ImageIo, RgbRoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(1);
  const auto img = oracle::randomImage(rng, 31, 17);
  saveRgb(dir / "a.png", img);
  EXPECT_EQ(loadRgb(dir / "a.png"), img);
  const auto info = probeRaster(dir / "a.png");
  EXPECT_EQ(info.channels, 3);
  EXPECT_EQ(info.size, (Size{31, 17}));
}

TEST(ImageIo, MaskIsStoredAs0And255) {
  TempDir dir;
  BinaryMask m(3, 1);
  m.set(1, 0, true);
  saveMask(dir / "m.png", m);
  const auto info = probeRaster(dir / "m.png");
  EXPECT_EQ(info.channels, 1);
  EXPECT_EQ(info.bit_depth, 8);
  Raster<std::uint8_t> raw(3, 1);
  raw.at(1, 0) = 255;
  saveGray8(dir / "raw.png", raw);
  EXPECT_EQ(egoseg::testing::readFile(dir / "m.png"), egoseg::testing::readFile(dir / "raw.png"));
}

TEST(ImageIo, DepthRoundTripKeepsMillimeters) {
  TempDir dir;
  DepthImage d(4, 2);
  d.at(0, 0) = 0;
  d.at(1, 0) = 250;
  d.at(2, 0) = 65535;
  d.at(3, 1) = 1234;
  saveDepth(dir / "d.png", d);
  EXPECT_EQ(loadDepth(dir / "d.png"), d);
  EXPECT_THROW(loadRgb(dir / "d.png"), FormatError);
  EXPECT_THROW(loadMask(dir / "d.png"), FormatError);
}

TEST(ImageIo, WrongKindsRejected) {
  TempDir dir;
  saveRgb(dir / "rgb.png", RgbImage(4, 4));
  EXPECT_THROW(loadDepth(dir / "rgb.png"), FormatError);
  EXPECT_THROW(loadMask(dir / "rgb.png"), FormatError);
}

TEST(ImageIo, UnreadableFilesAreIoErrors) {
  TempDir dir;
  EXPECT_THROW(loadRgb(dir / "nope.png"), IoError);
  {
    std::ofstream junk(dir / "junk.png");
    junk << "garbage";
  }
  EXPECT_THROW(loadMask(dir / "junk.png"), IoError);
}

TEST(ImageIo, ListImagesSortedAndFiltered) {
  TempDir dir;
  for (const char* name : {"b.png", "a.JPG", "c.txt", "d.jpeg"}) {
    std::ofstream(dir / name) << "x";
  }
  fs::create_directories(dir / "sub.png");
  const auto files = listImages(dir.path());
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files[0].filename(), "a.JPG");
  EXPECT_EQ(files[1].filename(), "b.png");
  EXPECT_EQ(files[2].filename(), "d.jpeg");
  EXPECT_THROW(listImages(dir / "missing"), IoError);
}

TEST(Raster, InvalidDimensionsRejected) {
  EXPECT_THROW(RgbImage(0, 3), UsageError);
  EXPECT_THROW(BinaryMask(4, -1), UsageError);
  EXPECT_THROW((Raster<int>(2, 2, std::vector<int>(3))), UsageError);
  const std::vector<std::uint8_t> bytes{0, 7, 255, 0};
  const auto m = BinaryMask::from_bytes(2, 2, bytes);
  EXPECT_EQ(m.foreground_count(), 2u);
  EXPECT_EQ(m.labels()[1], 1);
}
