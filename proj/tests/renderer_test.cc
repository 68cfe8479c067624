// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "typotrace/renderer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "typotrace/error.h"
#include "typotrace/keyboard.h"
#include "typotrace/util.h"

namespace typotrace {
namespace {

namespace fs = std::filesystem;

std::vector<PixelPoint> Lit(const SwypeImage& image) {
  std::vector<PixelPoint> out;
  for (int r = 0; r < SwypeImage::kHeight; ++r) {
    for (int c = 0; c < SwypeImage::kWidth; ++c) {
      if (!image.IsBackground(r, c)) out.push_back({r, c});
    }
  }
  return out;
}

fs::path TempPath(const std::string& name) {
  return fs::temp_directory_path() /
         ("typotrace_renderer_" + std::to_string(::getpid()) + "_" + name);
}

TEST(RendererTest, SingleCharacterIsOneDot) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SwypeImage image = RenderCanonical("q", RenderConfig{}, seed);
    const auto lit = Lit(image);
    ASSERT_EQ(lit.size(), 1u);
    EXPECT_GE(lit[0].row, 10);
    EXPECT_LE(lit[0].row, 11);
    EXPECT_GE(lit[0].col, 0);
    EXPECT_LE(lit[0].col, 1);
    EXPECT_EQ(image.Pixel(lit[0].row, lit[0].col), DefaultPalette()[0]);
  }
}

TEST(RendererTest, ShapeIsFixed) {
  for (const char* d : {"a", "google.com", "xn--80ak6aa92e.com", "1234567890-"}) {
    const SwypeImage image = RenderCanonical(d, RenderConfig{}, 3);
    EXPECT_EQ(image.data().size(),
              static_cast<std::size_t>(40 * 100 * 3));
  }
}

TEST(RendererTest, CanonicalRenderIsDeterministic) {
  const RenderConfig config;
  EXPECT_EQ(RenderCanonical("facebook.com", config, 7),
            RenderCanonical("facebook.com", config, 7));
  EXPECT_EQ(RenderCanonical("FaceBook.com", config, 7),
            RenderCanonical("facebook.com", config, 7));
}

TEST(RendererTest, StreamRendersVary) {
  RenderConfig config;
  config.seed_mode = SeedMode::kStream;
  Rng rng(11);
  std::vector<PixelPoint> first = TracePoints("amazon.com", config, rng);
  bool differs = false;
  for (int i = 0; i < 20 && !differs; ++i) {
    differs = TracePoints("amazon.com", config, rng) != first;
  }
  EXPECT_TRUE(differs);
}

TEST(RendererTest, TwoKeyStroke) {
  const SwypeImage image = RenderCanonical("ab", RenderConfig{}, 5);
  const Rgb color = DefaultPalette()[0];
  bool start = false, end = false;
  for (const PixelPoint& p : Lit(image)) {
    EXPECT_EQ(image.Pixel(p.row, p.col), color);
    start |= p.row >= 20 && p.row <= 21 && p.col <= 1;
    end |= p.row >= 30 && p.row <= 31 && p.col >= 40 && p.col <= 41;
  }
  EXPECT_TRUE(start);
  EXPECT_TRUE(end);
  EXPECT_GE(Lit(image).size(), 41u);
}

TEST(RendererTest, TracePointsFollowKeyGrid) {
  Rng rng(2);
  const std::string domain = "qwerty-123.zm";
  const auto points = TracePoints(domain, RenderConfig{}, rng);
  ASSERT_EQ(points.size(), domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const GridCoord key = KeyPosition(domain[i]);
    EXPECT_GE(points[i].row, key.row * 10);
    EXPECT_LE(points[i].row, key.row * 10 + 1);
    EXPECT_GE(points[i].col, std::min(key.col * 10, 99));
    EXPECT_LE(points[i].col, std::min(key.col * 10 + 1, 99));
  }
}

TEST(RendererTest, ZeroNoiseHitsKeyCentresExactly) {
  RenderConfig config;
  config.noise_amplitude = 0.0;
  Rng rng(0);
  const auto points = TracePoints("-.", config, rng);
  EXPECT_EQ(points[0], (PixelPoint{0, 100 - 1}));  // col 10 * 10 clamps to 99
  EXPECT_EQ(points[1], (PixelPoint{30, 80}));
}

TEST(RendererTest, PaletteCyclesOverStrokes) {
  const SwypeImage image = RenderCanonical("facebook.com", RenderConfig{}, 0);
  const auto palette = DefaultPalette();
  std::set<std::tuple<float, float, float>> seen;
  for (const PixelPoint& p : Lit(image)) {
    const Rgb c = image.Pixel(p.row, p.col);
    seen.insert({c.r, c.g, c.b});
  }
  std::set<std::tuple<float, float, float>> expected;
  for (const Rgb& c : palette) expected.insert({c.r, c.g, c.b});
  EXPECT_EQ(seen, expected);
}

TEST(RendererTest, BatchMatchesSingleRenders) {
  const RenderConfig config;
  EXPECT_TRUE(RenderBatch({}, config, 1).empty());
  const std::vector<std::string> two = {"a", "b"};
  const auto images = RenderBatch(two, config, 1);
  ASSERT_EQ(images.size(), 2u);
  EXPECT_EQ(images[0], RenderCanonical("a", config, 1));
  EXPECT_EQ(images[1], RenderCanonical("b", config, 1));

  std::vector<std::string> many;
  for (int i = 0; i < 64; ++i) many.push_back("site" + std::to_string(i) + ".com");
  EXPECT_EQ(RenderBatch(many, config, 1).size(), 64u);
}

TEST(RendererTest, BatchErrorsCarryIndex) {
  const std::vector<std::string> domains = {"ok.com", "bad_domain.com"};
  try {
    RenderBatch(domains, RenderConfig{}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedCharacter);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(RendererTest, RejectsBadInput) {
  try {
    RenderCanonical("", RenderConfig{}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyString);
  }
  RenderConfig bad;
  bad.palette.clear();
  EXPECT_THROW(RenderCanonical("a", bad, 0), Error);
}

TEST(RendererTest, BresenhamIsContiguous) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const PixelPoint a{static_cast<int>(rng.UniformIndex(40)),
                       static_cast<int>(rng.UniformIndex(100))};
    const PixelPoint b{static_cast<int>(rng.UniformIndex(40)),
                       static_cast<int>(rng.UniformIndex(100))};
    const auto line = BresenhamLine(a, b);
    ASSERT_EQ(line.front(), a);
    ASSERT_EQ(line.back(), b);
    const std::size_t steps = std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
    EXPECT_EQ(line.size(), steps + 1);
    for (std::size_t i = 1; i < line.size(); ++i) {
      EXPECT_LE(std::abs(line[i].row - line[i - 1].row), 1);
      EXPECT_LE(std::abs(line[i].col - line[i - 1].col), 1);
    }
  }
}

TEST(RendererTest, PngRoundTrip) {
  const fs::path zero = TempPath("zero.png");
  ExportPng(SwypeImage{}, zero);
  EXPECT_EQ(ImportPng(zero), SwypeImage{});
  fs::remove(zero);

  const SwypeImage image = RenderCanonical("facebook.com", RenderConfig{}, 7);
  const fs::path path = TempPath("fb.png");
  ExportPng(image, path);
  const SwypeImage back = ImportPng(path);
  for (std::size_t i = 0; i < image.data().size(); ++i) {
    EXPECT_NEAR(back.data()[i], image.data()[i], 0.5 / 255.0 + 1e-6);
  }
  EXPECT_EQ(ReadFileBytes(path), EncodePng(image));
  fs::remove(path);
}

TEST(RendererTest, ImportRejectsGarbage) {
  const fs::path path = TempPath("junk.png");
  AtomicWriteFile(path, "not an image");
  try {
    ImportPng(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormatError);
  }
  fs::remove(path);
}

}  // namespace
}  // namespace typotrace
