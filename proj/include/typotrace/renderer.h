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

#ifndef TYPOTRACE_RENDERER_H_
#define TYPOTRACE_RENDERER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typotrace/util.h"

namespace typotrace {

struct Rgb {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Blue, light blue, cyan, green, yellow, orange, red, magenta.
std::vector<Rgb> DefaultPalette();

enum class SeedMode {
  // Noise derived from (seed, domain): every render of a string is identical.
  kCanonical,
  // Noise drawn from an advancing generator: repeated renders differ.
  kStream,
};

struct RenderConfig {
  double noise_amplitude = 0.1;  // key units
  double scale = 10.0;           // pixels per key unit
  std::vector<Rgb> palette = DefaultPalette();
  SeedMode seed_mode = SeedMode::kCanonical;

  // Throws kInvalidArgument.
  void Validate() const;
};

// A 40x100 RGB trace image stored row-major as (row, col, channel) with
// intensities in [0, 1]. The background is exactly zero.
class SwypeImage {
 public:
  static constexpr int kHeight = 40;
  static constexpr int kWidth = 100;
  static constexpr int kChannels = 3;
  static constexpr int kSize = kHeight * kWidth * kChannels;

  SwypeImage() : pixels_(kSize, 0.0f) {}

  float at(int row, int col, int channel) const {
    return pixels_[Offset(row, col, channel)];
  }
  void SetPixel(int row, int col, const Rgb& color);
  Rgb Pixel(int row, int col) const;
  bool IsBackground(int row, int col) const;

  std::span<const float> data() const { return pixels_; }
  std::span<float> mutable_data() { return pixels_; }

  friend bool operator==(const SwypeImage&, const SwypeImage&) = default;

 private:
  static int Offset(int row, int col, int channel) {
    return (row * kWidth + col) * kChannels + channel;
  }

  std::vector<float> pixels_;
};

struct PixelPoint {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Lowercases and checks every character against the keyboard alphabet.
// Throws kEmptyString or kUnsupportedCharacter (with the position).
std::string NormalizeDomain(std::string_view domain);

// Noised, scaled and clamped key positions of each character, drawing two
// uniforms (row then column) per character from `rng`.
std::vector<PixelPoint> TracePoints(std::string_view domain,
                                    const RenderConfig& config, Rng& rng);

// Stroke i joins characters i and i+1 in palette[i % palette.size()], later
// strokes overwriting earlier ones. A single character renders one dot.
SwypeImage Render(std::string_view domain, const RenderConfig& config,
                  Rng& rng);

// Render with noise seeded by DeriveSeed(seed, normalized domain).
SwypeImage RenderCanonical(std::string_view domain, const RenderConfig& config,
                           std::uint64_t seed);

// Canonical mode seeds each item from its domain, stream mode from its index.
// Errors carry the index of the first failing domain.
std::vector<SwypeImage> RenderBatch(std::span<const std::string> domains,
                                    const RenderConfig& config,
                                    std::uint64_t seed);

// Writes an 8-bit RGB PNG with value round(intensity * 255).
void ExportPng(const SwypeImage& image, const std::filesystem::path& path);
std::string EncodePng(const SwypeImage& image);
SwypeImage ImportPng(const std::filesystem::path& path);

// Integer line rasterization. Exposed for tests.
std::vector<PixelPoint> BresenhamLine(PixelPoint from, PixelPoint to);

}  // namespace typotrace

#endif  // TYPOTRACE_RENDERER_H_
