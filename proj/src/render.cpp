#include "vpi/render.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

#include "vpi/error.hpp"

namespace vpi {

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Rgb Image::at(int col, int row) const {
  const auto i = (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(col)) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(int col, int row, Rgb color) {
  if (col < 0 || row < 0 || col >= width_ || row >= height_) return;
  const auto i = (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(col)) * 3;
  data_[i] = color.r;
  data_[i + 1] = color.g;
  data_[i + 2] = color.b;
}

PixelCoord to_pixel(const Point& p, int width, int height) {
  return {static_cast<int>(std::lround(p.x * (width - 1))),
          static_cast<int>(std::lround((1.0 - p.y) * (height - 1)))};
}

Rgb palette_rgb(std::string_view color) {
  if (color == "red") return {214, 40, 40};
  if (color == "green") return {46, 160, 67};
  if (color == "blue") return {40, 90, 220};
  if (color == "yellow") return {245, 205, 30};
  if (color == "orange") return {245, 130, 32};
  if (color == "purple") return {130, 60, 180};
  if (color == "white") return {250, 250, 250};
  if (color == "brown") return {120, 72, 36};
  return {128, 128, 128};
}

namespace {

constexpr Rgb kOutline{40, 40, 40};
constexpr Rgb kText{20, 20, 20};
constexpr double kOutlineWidth = 2.0;

// Offsets are in pixels from the glyph center, rows growing downward.
// `half` is the half-extent of the glyph.
bool inside_polygon(double x, double y, std::span<const std::array<double, 2>> poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a[1] > y) != (b[1] > y) &&
        x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0]) {
      inside = !inside;
    }
  }
  return inside;
}

bool inside_shape(std::string_view shape, double x, double y, double half) {
  if (half <= 0.0) return false;
  if (shape == "cube") return std::abs(x) <= half && std::abs(y) <= half;
  if (shape == "sphere" || shape == "cylinder") return x * x + y * y <= half * half;
  if (shape == "box") {
    const double hw = half;
    const double hh = 0.7 * half;
    const double r = 0.3 * half;
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ax > hw || ay > hh) return false;
    if (ax <= hw - r || ay <= hh - r) return true;
    const double cx = ax - (hw - r);
    const double cy = ay - (hh - r);
    return cx * cx + cy * cy <= r * r;
  }
  if (shape == "triangle") {
    const std::array<std::array<double, 2>, 3> tri = {
        {{0.0, -half}, {half, 0.8 * half}, {-half, 0.8 * half}}};
    return inside_polygon(x, y, tri);
  }
  if (shape == "star") {
    std::array<std::array<double, 2>, 10> star{};
    for (int k = 0; k < 10; ++k) {
      const double radius = (k % 2 == 0) ? half : 0.42 * half;
      const double angle = -std::numbers::pi / 2.0 + k * std::numbers::pi / 5.0;
      star[static_cast<std::size_t>(k)] = {radius * std::cos(angle), radius * std::sin(angle)};
    }
    return inside_polygon(x, y, star);
  }
  // Unknown shape tokens render as a diamond.
  return std::abs(x) + std::abs(y) <= half;
}

Rgb darker(Rgb c) {
  return {static_cast<std::uint8_t>(c.r * 3 / 5), static_cast<std::uint8_t>(c.g * 3 / 5),
          static_cast<std::uint8_t>(c.b * 3 / 5)};
}

void draw_glyph(Image& img, const ObjectInstance& obj, PixelCoord center, int glyph_size) {
  const double half = glyph_size / 2.0;
  const Rgb fill = palette_rgb(obj.color);
  const Rgb ring = darker(fill);
  const int reach = static_cast<int>(std::ceil(half)) + 1;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const double x = dx;
      const double y = dy;
      if (!inside_shape(obj.shape, x, y, half)) continue;
      Rgb color = fill;
      if (!inside_shape(obj.shape, x, y, half - kOutlineWidth)) {
        color = kOutline;
      } else if (obj.shape == "cylinder") {
        const double r = std::sqrt(x * x + y * y);
        const double inner = 0.55 * half;
        if (r >= inner - 1.0 && r <= inner + 1.0) color = ring;
      }
      img.set(center.col + dx, center.row + dy, color);
    }
  }
}

// 5x7 capitals; rows top to bottom, '1' marks an inked pixel.
constexpr std::array<std::array<const char*, 7>, 26> kFont = {{
    {"01110", "10001", "10001", "11111", "10001", "10001", "10001"},
    {"11110", "10001", "10001", "11110", "10001", "10001", "11110"},
    {"01110", "10001", "10000", "10000", "10000", "10001", "01110"},
    {"11100", "10010", "10001", "10001", "10001", "10010", "11100"},
    {"11111", "10000", "10000", "11110", "10000", "10000", "11111"},
    {"11111", "10000", "10000", "11110", "10000", "10000", "10000"},
    {"01110", "10001", "10000", "10111", "10001", "10001", "01111"},
    {"10001", "10001", "10001", "11111", "10001", "10001", "10001"},
    {"01110", "00100", "00100", "00100", "00100", "00100", "01110"},
    {"00111", "00010", "00010", "00010", "00010", "10010", "01100"},
    {"10001", "10010", "10100", "11000", "10100", "10010", "10001"},
    {"10000", "10000", "10000", "10000", "10000", "10000", "11111"},
    {"10001", "11011", "10101", "10101", "10001", "10001", "10001"},
    {"10001", "10001", "11001", "10101", "10011", "10001", "10001"},
    {"01110", "10001", "10001", "10001", "10001", "10001", "01110"},
    {"11110", "10001", "10001", "11110", "10000", "10000", "10000"},
    {"01110", "10001", "10001", "10001", "10101", "10010", "01101"},
    {"11110", "10001", "10001", "11110", "10100", "10010", "10001"},
    {"01111", "10000", "10000", "01110", "00001", "00001", "11110"},
    {"11111", "00100", "00100", "00100", "00100", "00100", "00100"},
    {"10001", "10001", "10001", "10001", "10001", "10001", "01110"},
    {"10001", "10001", "10001", "10001", "10001", "01010", "00100"},
    {"10001", "10001", "10001", "10101", "10101", "10101", "01010"},
    {"10001", "10001", "01010", "00100", "01010", "10001", "10001"},
    {"10001", "10001", "10001", "01010", "00100", "00100", "00100"},
    {"11111", "00001", "00010", "00100", "01000", "10000", "11111"},
}};

void draw_label(Image& img, std::string_view text, PixelCoord anchor) {
  constexpr int kAdvance = 6;
  const int width = static_cast<int>(text.size()) * kAdvance - 1;
  int left = anchor.col - width / 2;
  for (char raw : text) {
    const int c = std::toupper(static_cast<unsigned char>(raw));
    if (c >= 'A' && c <= 'Z') {
      const auto& glyph = kFont[static_cast<std::size_t>(c - 'A')];
      for (int r = 0; r < 7; ++r) {
        for (int k = 0; k < 5; ++k) {
          if (glyph[static_cast<std::size_t>(r)][k] == '1') img.set(left + k, anchor.row + r, kText);
        }
      }
    }
    left += kAdvance;
  }
}

}  // namespace

Image render_scene(const Scene& scene, const RenderOptions& options) {
  if (options.width < 64 || options.height < 64) {
    throw Error(ErrorKind::kInvalidArgument, "render size must be at least 64x64");
  }
  if (options.glyph_size <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "glyph size must be positive");
  }
  Image img(options.width, options.height, options.background);

  // Far objects (larger y) first so nearer glyphs overlap them.
  std::vector<const ObjectInstance*> order;
  for (const auto& obj : scene.objects) order.push_back(&obj);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->position.y != b->position.y) return a->position.y > b->position.y;
    return a->id < b->id;
  });
  for (const auto* obj : order) {
    draw_glyph(img, *obj, to_pixel(obj->position, options.width, options.height),
               options.glyph_size);
  }
  if (options.annotate) {
    for (const auto* obj : order) {
      PixelCoord anchor = to_pixel(obj->position, options.width, options.height);
      anchor.row += options.glyph_size / 2 + 3;
      draw_label(img, obj->name, anchor);
    }
  }
  return img;
}

}  // namespace vpi
