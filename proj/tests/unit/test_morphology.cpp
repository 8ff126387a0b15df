#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "egoseg/morphology.hpp"
#include "support/oracles.hpp"

using namespace egoseg;

namespace {

BinaryMask squareWithHole() {
  BinaryMask m(14, 14);
  for (int y = 2; y < 12; ++y) {
    for (int x = 2; x < 12; ++x) m.set(x, y, true);
  }
  m.set(6, 7, false);
  return m;
}

MorphConfig noMorph() { return {0, 0, 0}; }

}  // namespace

TEST(Morphology, OpeningKeepsRectangles) {
  BinaryMask m(20, 20);
  for (int y = 4; y < 9; ++y) {
    for (int x = 3; x < 15; ++x) m.set(x, y, true);
  }
  EXPECT_EQ(opening(m, 1), m);
  EXPECT_EQ(closing(m, 2), m);
}

TEST(Morphology, IsolatedPixelRemovedByOpening) {
  BinaryMask m(9, 9);
  m.set(4, 4, true);
  EXPECT_TRUE(morphClean(m, {1, 0, 0}).empty());
}

TEST(Morphology, EmptyMaskIsFixpoint) {
  const BinaryMask m(12, 7);
  for (const MorphConfig c : {MorphConfig{}, MorphConfig{3, 4, 100}, noMorph()}) {
    EXPECT_EQ(morphClean(m, c), m);
  }
}

TEST(Morphology, ClosingFillsInteriorHole) {
  const BinaryMask m = squareWithHole();
  const BinaryMask closed = morphClean(m, {0, 1, 0});
  EXPECT_EQ(closed, oracle::erode(oracle::dilate(m, 1), 1));
  for (int y = 0; y < 14; ++y) {
    for (int x = 0; x < 14; ++x) {
      EXPECT_EQ(closed.at(x, y), x >= 2 && x < 12 && y >= 2 && y < 12) << x << "," << y;
    }
  }
}

TEST(Morphology, DisabledStagesAreIdentity) {
  std::mt19937_64 rng(1);
  const auto m = oracle::randomMask(rng, 31, 17, 0.4);
  EXPECT_EQ(morphClean(m, noMorph()), m);
}

TEST(Morphology, DiskHalfWidths) {
  EXPECT_EQ(detail::disk_half_width(0, 0), 0);
  EXPECT_EQ(detail::disk_half_width(1, 0), 1);
  EXPECT_EQ(detail::disk_half_width(1, 1), 1);
  EXPECT_EQ(detail::disk_half_width(2, 0), 2);
  EXPECT_EQ(detail::disk_half_width(2, 1), 2);
  EXPECT_EQ(detail::disk_half_width(2, 2), 1);
  EXPECT_EQ(detail::disk_half_width(3, 3), 1);
}

TEST(Morphology, DilateErodeMatchBruteForce) {
  std::mt19937_64 rng(2);
  const int sizes[][2] = {{1, 1}, {1, 9}, {9, 1}, {5, 5}, {16, 16}, {23, 11}, {40, 33}};
  for (const auto& s : sizes) {
    for (int r = 0; r <= 5; ++r) {
      for (double density : {0.1, 0.5, 0.9}) {
        const auto m = oracle::randomMask(rng, s[0], s[1], density);
        ASSERT_EQ(dilate(m, r), oracle::dilate(m, r)) << s[0] << "x" << s[1] << " r=" << r;
        ASSERT_EQ(erode(m, r), oracle::erode(m, r)) << s[0] << "x" << s[1] << " r=" << r;
      }
    }
  }
}

TEST(Morphology, OpeningAndClosingAreIdempotent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto m = oracle::randomMask(rng, 32, 32, 0.45);
    for (int r = 1; r <= 3; ++r) {
      const auto o = opening(m, r);
      const auto c = closing(m, r);
      ASSERT_EQ(opening(o, r), o);
      ASSERT_EQ(closing(c, r), c);
    }
  }
}

TEST(Morphology, MorphCleanIdempotentWithoutAreaFilter) {
  std::mt19937_64 rng(4);
  const MorphConfig configs[] = {{1, 2, 0}, {1, 1, 0}, {2, 1, 0}, {0, 3, 0}, {2, 0, 0}};
  for (const auto& config : configs) {
    for (int i = 0; i < 200; ++i) {
      const auto m = oracle::randomMask(rng, 32, 32, 0.3 + 0.002 * i);
      const auto once = morphClean(m, config);
      ASSERT_EQ(morphClean(once, config), once)
          << "open " << config.open_radius << " close " << config.close_radius << " #" << i;
    }
  }
}

TEST(Morphology, NeverGrowsWithoutClosing) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto m = oracle::randomMask(rng, 32, 32, 0.5);
    const auto out = morphClean(m, {1 + i % 3, 0, i % 20});
    ASSERT_LE(out.foreground_count(), m.foreground_count());
    for (std::size_t k = 0; k < m.pixel_count(); ++k) {
      ASSERT_LE(out.labels()[k], m.labels()[k]);
    }
  }
}

TEST(Morphology, ScaledAreaThreshold) {
  const MorphConfig c;
  EXPECT_EQ(c.scaled_for({720, 720}).min_component_area, 64);
  EXPECT_EQ(c.scaled_for({360, 360}).min_component_area, 16);
  EXPECT_EQ(c.scaled_for({240, 240}).min_component_area, 7);
  EXPECT_EQ(c.scaled_for({1440, 720}).min_component_area, 128);
}

TEST(Morphology, RejectsNegativeParameters) {
  EXPECT_THROW((MorphConfig{-1, 0, 0}.validate()), UsageError);
  EXPECT_THROW((MorphConfig{0, 0, -5}.validate()), UsageError);
}

TEST(Components, EmptyMaskHasNone) {
  EXPECT_TRUE(connectedComponents(BinaryMask(8, 8)).empty());
}

TEST(Components, DiagonalNeighborsJoin) {
  BinaryMask m(4, 4);
  m.set(1, 1, true);
  m.set(2, 2, true);
  const auto cc = connectedComponents(m);
  ASSERT_EQ(cc.size(), 1u);
  EXPECT_EQ(cc[0].area, 2);
  EXPECT_EQ(cc[0].box.x_min, 1);
  EXPECT_EQ(cc[0].box.y_min, 1);
  EXPECT_EQ(cc[0].box.x_max, 2);
  EXPECT_EQ(cc[0].box.y_max, 2);
}

TEST(Components, MatchFloodFillOracle) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto m = oracle::randomMask(rng, 16, 16, 0.15 + 0.005 * i);
    const auto cc = connectedComponents(m);
    auto want = oracle::componentAreas(m);
    std::vector<long long> got;
    for (const auto& c : cc) got.push_back(c.area);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    ASSERT_EQ(got, want);
  }
}

TEST(Components, LabelsCoverExactlyTheForeground) {
  std::mt19937_64 rng(7);
  const auto m = oracle::randomMask(rng, 40, 25, 0.4);
  const auto labels = labelComponents(m);
  std::vector<long long> area(labels.components.size() + 1, 0);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const int l = labels.labels.at(x, y);
      ASSERT_EQ(l != 0, m.at(x, y));
      ++area[l];
    }
  }
  for (const auto& c : labels.components) EXPECT_EQ(area[c.label], c.area);
}

TEST(Components, AreasSumToForegroundCount) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto m = oracle::randomMask(rng, 32, 32, (i % 10) / 10.0);
    const auto cc = connectedComponents(m);
    long long sum = 0;
    for (const auto& c : cc) sum += c.area;
    ASSERT_EQ(sum, static_cast<long long>(m.foreground_count()));
  }
}

TEST(Components, RemoveSmallKeepsLargeOnes) {
  BinaryMask m(20, 20);
  for (int y = 5; y < 15; ++y) {
    for (int x = 5; x < 15; ++x) m.set(x, y, true);
  }
  m.set(0, 0, true);
  m.set(19, 0, true);
  m.set(18, 0, true);
  const auto out = removeSmallComponents(m, 3);
  EXPECT_EQ(out.foreground_count(), 100u);
  EXPECT_FALSE(out.at(0, 0));
  EXPECT_EQ(removeSmallComponents(m, 2).foreground_count(), 102u);
}
