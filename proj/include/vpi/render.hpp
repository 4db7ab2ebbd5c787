#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vpi/scene.hpp"

namespace vpi {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Packed 8-bit RGB raster, row-major, top row first.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int col, int row) const;
  void set(int col, int row, Rgb color);
  std::span<const std::uint8_t> bytes() const { return data_; }
  std::span<std::uint8_t> mutable_bytes() { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct RenderOptions {
  int width = 512;
  int height = 512;
  Rgb background{232, 222, 200};
  int glyph_size = 40;
  bool annotate = false;
};

struct PixelCoord {
  int col = 0;
  int row = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Table point to pixel: (round(x * (w - 1)), round((1 - y) * (h - 1))).
PixelCoord to_pixel(const Point& p, int width, int height);

Rgb palette_rgb(std::string_view color);

/// Top-down view of the table; one glyph per object keyed by shape token.
/// Throws kInvalidArgument for options below 64x64 or a non-positive glyph.
Image render_scene(const Scene& scene, const RenderOptions& options = {});

/// PNG with fixed filter and compression settings, so equal images encode to
/// equal bytes.
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> png);

inline constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

}  // namespace vpi
