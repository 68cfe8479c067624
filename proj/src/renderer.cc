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

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "typotrace/error.h"
#include "typotrace/keyboard.h"

namespace typotrace {

std::vector<Rgb> DefaultPalette() {
  return {
      {0.0f, 0.0f, 1.0f},    // blue
      {0.33f, 0.66f, 1.0f},  // light blue
      {0.0f, 1.0f, 1.0f},    // cyan
      {0.0f, 1.0f, 0.0f},    // green
      {1.0f, 1.0f, 0.0f},    // yellow
      {1.0f, 0.6f, 0.0f},    // orange
      {1.0f, 0.0f, 0.0f},    // red
      {1.0f, 0.0f, 1.0f},    // magenta
  };
}

void RenderConfig::Validate() const {
  if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_amplitude must be >= 0");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be > 0");
  }
  if (palette.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "palette must not be empty");
  }
  for (const Rgb& c : palette) {
    for (float v : {c.r, c.g, c.b}) {
      if (!(v >= 0.0f && v <= 1.0f)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "palette intensities must lie in [0, 1]");
      }
    }
  }
}

void SwypeImage::SetPixel(int row, int col, const Rgb& color) {
  const int o = Offset(row, col, 0);
  pixels_[o] = color.r;
  pixels_[o + 1] = color.g;
  pixels_[o + 2] = color.b;
}

Rgb SwypeImage::Pixel(int row, int col) const {
  const int o = Offset(row, col, 0);
  return {pixels_[o], pixels_[o + 1], pixels_[o + 2]};
}

bool SwypeImage::IsBackground(int row, int col) const {
  const Rgb p = Pixel(row, col);
  return p.r == 0.0f && p.g == 0.0f && p.b == 0.0f;
}

std::string NormalizeDomain(std::string_view domain) {
  if (domain.empty()) {
    throw Error(ErrorCode::kEmptyString, "empty domain");
  }
  const KeyboardLayout& layout = KeyboardLayout::Qwerty();
  std::string out;
  out.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (!layout.Supports(domain[i])) {
      throw Error(ErrorCode::kUnsupportedCharacter,
                  "unsupported character at position " + std::to_string(i) +
                      " of \"" + std::string(domain) + "\"",
                  i);
    }
    out.push_back(FoldCase(domain[i]));
  }
  return out;
}

std::vector<PixelPoint> TracePoints(std::string_view domain,
                                    const RenderConfig& config, Rng& rng) {
  config.Validate();
  const std::string normalized = NormalizeDomain(domain);
  const KeyboardLayout& layout = KeyboardLayout::Qwerty();
  std::vector<PixelPoint> points;
  points.reserve(normalized.size());
  for (char c : normalized) {
    const GridCoord key = layout.Position(c);
    const double row_noise = rng.Uniform(0.0, config.noise_amplitude);
    const double col_noise = rng.Uniform(0.0, config.noise_amplitude);
    const double y = (key.row + row_noise) * config.scale;
    const double x = (key.col + col_noise) * config.scale;
    const int row = std::clamp(static_cast<int>(std::floor(y + 0.5)), 0,
                               SwypeImage::kHeight - 1);
    const int col = std::clamp(static_cast<int>(std::floor(x + 0.5)), 0,
                               SwypeImage::kWidth - 1);
    points.push_back({row, col});
  }
  return points;
}

std::vector<PixelPoint> BresenhamLine(PixelPoint from, PixelPoint to) {
  std::vector<PixelPoint> out;
  int x0 = from.col, y0 = from.row;
  const int x1 = to.col, y1 = to.row;
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    out.push_back({y0, x0});
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
  return out;
}

SwypeImage Render(std::string_view domain, const RenderConfig& config,
                  Rng& rng) {
  const std::vector<PixelPoint> points = TracePoints(domain, config, rng);
  SwypeImage image;
  if (points.size() == 1) {
    image.SetPixel(points[0].row, points[0].col, config.palette[0]);
    return image;
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Rgb& color = config.palette[i % config.palette.size()];
    for (const PixelPoint& p : BresenhamLine(points[i], points[i + 1])) {
      image.SetPixel(p.row, p.col, color);
    }
  }
  return image;
}

SwypeImage RenderCanonical(std::string_view domain, const RenderConfig& config,
                           std::uint64_t seed) {
  const std::string normalized = NormalizeDomain(domain);
  Rng rng(DeriveSeed(seed, normalized));
  return Render(normalized, config, rng);
}

std::vector<SwypeImage> RenderBatch(std::span<const std::string> domains,
                                    const RenderConfig& config,
                                    std::uint64_t seed) {
  std::vector<SwypeImage> images;
  images.reserve(domains.size());
  for (std::size_t i = 0; i < domains.size(); ++i) {
    try {
      if (config.seed_mode == SeedMode::kCanonical) {
        images.push_back(RenderCanonical(domains[i], config, seed));
      } else {
        Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
        images.push_back(Render(domains[i], config, rng));
      }
    } catch (const Error& e) {
      RethrowWithContext(e, "domain " + std::to_string(i), i);
    }
  }
  return images;
}

namespace {

struct PngWriteState {
  std::string* out;
};

void PngWriteCallback(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<PngWriteState*>(png_get_io_ptr(png));
  state->out->append(reinterpret_cast<const char*>(data), length);
}

void PngFlushCallback(png_structp) {}

std::uint8_t Quantize(float v) {
  return static_cast<std::uint8_t>(
      std::clamp(std::lround(static_cast<double>(v) * 255.0), 0L, 255L));
}

}  // namespace

std::string EncodePng(const SwypeImage& image) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error(ErrorCode::kIoError, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIoError, "libpng init failed");
  }
  std::string out;
  PngWriteState state{&out};
  std::vector<std::uint8_t> rows(SwypeImage::kSize);
  const auto pixels = image.data();
  for (int i = 0; i < SwypeImage::kSize; ++i) rows[i] = Quantize(pixels[i]);
  std::vector<png_bytep> row_ptrs(SwypeImage::kHeight);
  for (int r = 0; r < SwypeImage::kHeight; ++r) {
    row_ptrs[r] = rows.data() + r * SwypeImage::kWidth * SwypeImage::kChannels;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIoError, "PNG encoding failed");
  }
  png_set_write_fn(png, &state, PngWriteCallback, PngFlushCallback);
  png_set_IHDR(png, info, SwypeImage::kWidth, SwypeImage::kHeight, 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void ExportPng(const SwypeImage& image, const std::filesystem::path& path) {
  AtomicWriteFile(path, EncodePng(image));
}

SwypeImage ImportPng(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kFormatError, "not a PNG: " + path.string());
  }
  if (img.width != SwypeImage::kWidth || img.height != SwypeImage::kHeight) {
    png_image_free(&img);
    throw Error(ErrorCode::kShapeMismatch, "PNG is not 100x40");
  }
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error(ErrorCode::kFormatError, "corrupt PNG: " + path.string());
  }
  SwypeImage image;
  auto pixels = image.mutable_data();
  for (int i = 0; i < SwypeImage::kSize; ++i) pixels[i] = buffer[i] / 255.0f;
  return image;
}

}  // namespace typotrace
