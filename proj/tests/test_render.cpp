#include <cmath>
#include <queue>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vpi/error.hpp"
#include "vpi/render.hpp"
#include "vpi/scenegen.hpp"

namespace vpi {
namespace {

using testing::grid_scene;
using testing::kind_of;

struct Blob {
  int pixels = 0;
  int min_col = 1 << 30;
  int max_col = -1;
  int min_row = 1 << 30;
  int max_row = -1;
};

// 4-connected components of pixels differing from the background.
std::vector<Blob> blobs(const Image& img, Rgb background) {
  const int w = img.width();
  const int h = img.height();
  std::vector<char> seen(static_cast<std::size_t>(w * h), 0);
  std::vector<Blob> out;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (seen[r * w + c] || img.at(c, r) == background) continue;
      Blob b;
      std::queue<std::pair<int, int>> q;
      q.push({c, r});
      seen[r * w + c] = 1;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        ++b.pixels;
        b.min_col = std::min(b.min_col, x);
        b.max_col = std::max(b.max_col, x);
        b.min_row = std::min(b.min_row, y);
        b.max_row = std::max(b.max_row, y);
        const int dx[] = {1, -1, 0, 0};
        const int dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = x + dx[k];
          const int ny = y + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (seen[ny * w + nx] || img.at(nx, ny) == background) continue;
          seen[ny * w + nx] = 1;
          q.push({nx, ny});
        }
      }
      out.push_back(b);
    }
  }
  return out;
}

TEST(ToPixel, MatchesMappingFormula) {
  EXPECT_EQ(to_pixel({0.0, 0.0}, 512, 512), (PixelCoord{0, 511}));
  EXPECT_EQ(to_pixel({1.0, 1.0}, 512, 512), (PixelCoord{511, 0}));
  EXPECT_EQ(to_pixel({0.5, 0.5}, 101, 101), (PixelCoord{50, 50}));
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    const double y = 1.0 - x * 0.5;
    const PixelCoord p = to_pixel({x, y}, 640, 480);
    EXPECT_EQ(p.col, static_cast<int>(std::lround(x * 639)));
    EXPECT_EQ(p.row, static_cast<int>(std::lround((1.0 - y) * 479)));
  }
}

TEST(RenderScene, OneBlobPerObjectAtItsPixel) {
  for (Task t : kAllTasks) {
    const Scene s = grid_scene(t);
    const RenderOptions opt;
    const Image img = render_scene(s, opt);
    const auto found = blobs(img, opt.background);
    ASSERT_EQ(found.size(), s.objects.size()) << task_name(t);
    for (const auto& obj : s.objects) {
      const PixelCoord p = to_pixel(obj.position, opt.width, opt.height);
      int containing = 0;
      for (const Blob& b : found) {
        if (p.col >= b.min_col && p.col <= b.max_col && p.row >= b.min_row && p.row <= b.max_row) {
          ++containing;
          EXPECT_LE(b.max_col - b.min_col + 1, opt.glyph_size + 3);
          EXPECT_LE(b.max_row - b.min_row + 1, opt.glyph_size + 3);
          if (obj.shape != "triangle" && obj.shape != "star") {
            EXPECT_NEAR((b.min_col + b.max_col) / 2.0, p.col, 1.0) << obj.name;
            EXPECT_NEAR((b.min_row + b.max_row) / 2.0, p.row, 1.0) << obj.name;
          }
        }
      }
      EXPECT_EQ(containing, 1) << obj.name;
      EXPECT_EQ(img.at(p.col, p.row), palette_rgb(obj.color)) << obj.name;
    }
  }
}

TEST(RenderScene, MovingAnObjectMovesItsBlob) {
  const Scene s = grid_scene(Task::kBlock);
  const Scene moved = apply_move(s, {0, {0.5, 0.8}});
  const Image a = render_scene(s);
  const Image b = render_scene(moved);
  EXPECT_NE(a, b);
  const PixelCoord old_p = to_pixel(s.objects[0].position, 512, 512);
  const PixelCoord new_p = to_pixel({0.5, 0.8}, 512, 512);
  EXPECT_EQ(b.at(old_p.col, old_p.row), RenderOptions{}.background);
  EXPECT_EQ(b.at(new_p.col, new_p.row), palette_rgb(s.objects[0].color));
}

TEST(RenderScene, NearerObjectsDrawLast) {
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({0.1 + 0.15 * i, 0.8});
  pts[1] = {0.1 + 0.02, 0.8 - 0.02};
  const Scene s = testing::make_scene(Task::kBlock, pts);
  const Image img = render_scene(s);
  const PixelCoord near_center = to_pixel(pts[1], 512, 512);
  EXPECT_EQ(img.at(near_center.col, near_center.row), palette_rgb(s.objects[1].color));
}

TEST(RenderScene, RejectsTinyCanvas) {
  RenderOptions opt;
  opt.width = 32;
  EXPECT_EQ(kind_of([&] { render_scene(grid_scene(Task::kBlock), opt); }),
            ErrorKind::kInvalidArgument);
  opt = {};
  opt.glyph_size = 0;
  EXPECT_EQ(kind_of([&] { render_scene(grid_scene(Task::kBlock), opt); }),
            ErrorKind::kInvalidArgument);
}

TEST(RenderScene, AnnotationAddsInk) {
  RenderOptions opt;
  opt.annotate = true;
  const Scene s = grid_scene(Task::kHousehold);
  const Image plain = render_scene(s);
  const Image labeled = render_scene(s, opt);
  EXPECT_NE(plain, labeled);
  EXPECT_GT(blobs(labeled, opt.background).size(), s.objects.size());
}

TEST(Png, EncodingIsDeterministicAndLossless) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Scene s = sample_scene(Task::kHousehold, seed);
    const auto a = encode_png(render_scene(s));
    const auto b = encode_png(render_scene(s));
    EXPECT_EQ(a, b);
    ASSERT_GE(a.size(), 8u);
    EXPECT_TRUE(std::equal(std::begin(kPngSignature), std::end(kPngSignature), a.begin()));
    EXPECT_EQ(decode_png(a), render_scene(s));
  }
}

TEST(Png, DecodeRejectsGarbage) {
  const std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5};
  EXPECT_EQ(kind_of([&] { decode_png(junk); }), ErrorKind::kParseError);
}

TEST(Png, EncodeRejectsEmptyImage) {
  EXPECT_EQ(kind_of([] { encode_png(Image{}); }), ErrorKind::kInvalidArgument);
}

TEST(Image, SetOutsideCanvasIsIgnored) {
  Image img(4, 3, {1, 2, 3});
  img.set(-1, 0, {9, 9, 9});
  img.set(4, 2, {9, 9, 9});
  img.set(3, 2, {7, 8, 9});
  EXPECT_EQ(img.at(3, 2), (Rgb{7, 8, 9}));
  EXPECT_EQ(img.at(0, 0), (Rgb{1, 2, 3}));
  EXPECT_EQ(img.bytes().size(), 36u);
}

}  // namespace
}  // namespace vpi
