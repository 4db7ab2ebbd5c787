#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vpi/error.hpp"
#include "vpi/residual.hpp"
#include "vpi/rng.hpp"
#include "vpi/scenegen.hpp"

namespace vpi {
namespace {

using testing::kind_of;
using testing::make_scene;

// Which 90-degree wedge around the target the displacement falls in,
// decided by comparing squared components; diagonals go horizontal.
GeometricRelation wedge(int dx, int dy) {
  if (dx * dx >= dy * dy) return dx > 0 ? GeometricRelation::kRightOf : GeometricRelation::kLeftOf;
  return dy > 0 ? GeometricRelation::kBehindOf : GeometricRelation::kInFrontOf;
}

TEST(ClassifyRelation, MatchesWedgeMembershipOnGrid) {
  // Dyadic steps keep every displacement exact, diagonal included.
  const Point target{0.5, 0.5};
  int checked = 0;
  int diagonal = 0;
  for (int i = -50; i <= 50; ++i) {
    for (int j = -50; j <= 50; ++j) {
      if (i == 0 && j == 0) continue;
      const Point source{0.5 + i / 128.0, 0.5 + j / 128.0};
      const GeometricRelation got = classify_relation(source, target);
      EXPECT_EQ(got, wedge(i, j)) << i << "," << j;
      if (std::abs(i) == std::abs(j)) {
        ++diagonal;
        EXPECT_TRUE(got == GeometricRelation::kLeftOf || got == GeometricRelation::kRightOf);
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 101 * 101 - 1);
  EXPECT_EQ(diagonal, 200);
}

TEST(ClassifyRelation, ExactDiagonalResolvesHorizontally) {
  for (double d : {0.001, 0.125, 0.25, 0.5}) {
    EXPECT_EQ(classify_relation({d, d}, {0.0, 0.0}), GeometricRelation::kRightOf);
    EXPECT_EQ(classify_relation({-d, d}, {0.0, 0.0}), GeometricRelation::kLeftOf);
    EXPECT_EQ(classify_relation({-d, -d}, {0.0, 0.0}), GeometricRelation::kLeftOf);
    EXPECT_EQ(classify_relation({d, -d}, {0.0, 0.0}), GeometricRelation::kRightOf);
  }
}

TEST(ClassifyRelation, CoincidentPositions) {
  EXPECT_EQ(kind_of([] { classify_relation({0.3, 0.3}, {0.3, 0.3}); }),
            ErrorKind::kCoincidentPositions);
}

TEST(ClassifyRelation, AxisConvention) {
  EXPECT_EQ(classify_relation({0.2, 0.5}, {0.5, 0.5}), GeometricRelation::kLeftOf);
  EXPECT_EQ(classify_relation({0.8, 0.5}, {0.5, 0.5}), GeometricRelation::kRightOf);
  EXPECT_EQ(classify_relation({0.5, 0.2}, {0.5, 0.5}), GeometricRelation::kInFrontOf);
  EXPECT_EQ(classify_relation({0.5, 0.8}, {0.5, 0.5}), GeometricRelation::kBehindOf);
}

TEST(SelectTarget, NearestWithSmallestIdTieBreak) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Scene s = sample_scene(Task::kHousehold, static_cast<std::uint64_t>(trial));
    const int source = static_cast<int>(rng.below(s.objects.size()));
    int expected = -1;
    double best = 1e9;
    for (const auto& o : s.objects) {
      if (o.id == source) continue;
      const double d = distance(o.position, s.at(source).position);
      if (d < best) {
        best = d;
        expected = o.id;
      }
    }
    EXPECT_EQ(select_target_object(s, source), expected);
  }

  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({0.1 + 0.15 * i, 0.1});
  pts[0] = {0.5, 0.625};
  pts[4] = {0.5, 0.375};
  pts[3] = {0.5, 0.5};
  EXPECT_EQ(select_target_object(make_scene(Task::kBlock, pts), 3), 0);
}

TEST(DetectMovedObject, ThresholdAndErrors) {
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({0.1 + 0.15 * i, 0.3});
  const Scene before = make_scene(Task::kBlock, pts);

  Scene after = before;
  after.objects[2].position.x += 0.2;
  EXPECT_EQ(detect_moved_object(before, after), 2);

  Scene jitter = before;
  jitter.objects[1].position.y += 0.009;
  EXPECT_EQ(kind_of([&] { detect_moved_object(before, jitter); }), ErrorKind::kNoMove);
  jitter.objects[1].position.y += 0.002;
  EXPECT_EQ(detect_moved_object(before, jitter), 1);

  Scene two = after;
  two.objects[4].position.y += 0.3;
  EXPECT_EQ(kind_of([&] { detect_moved_object(before, two); }), ErrorKind::kMultipleMoves);
}

TEST(GroundTruthResidual, DescribesTheMove) {
  std::vector<Point> pts = {{0.1, 0.1}, {0.9, 0.9}, {0.1, 0.9}, {0.9, 0.1}, {0.5, 0.5}, {0.3, 0.7}};
  const Scene before = make_scene(Task::kHousehold, [&] {
    std::vector<Point> all = pts;
    for (int i = 0; i < 6; ++i) all.push_back({0.15 + 0.12 * i, 0.3});
    return all;
  }());
  // apple (id 0) lands just below the orange drink (id 5).
  const Point drink = before.at(5).position;
  const Scene after = apply_move(before, {0, {drink.x, drink.y - 0.06}});
  const VisualResidual r = ground_truth_residual(before, after);
  EXPECT_EQ(r.semantic.source, (ObjectDescriptor{"apple", "red", "sphere"}));
  EXPECT_EQ(r.semantic.target, (ObjectDescriptor{"orange drink", "orange", "cylinder"}));
  EXPECT_EQ(r.geometric, GeometricRelation::kInFrontOf);
  EXPECT_EQ(r.description, "Move the apple in front of the orange drink.");
  EXPECT_FALSE(r.unparsed);
}

TEST(CanonicalDescription, BehindDropsOf) {
  const SemanticProperty sem{{"red cube", "red", "cube"}, {"blue cube", "blue", "cube"}};
  EXPECT_EQ(canonical_description(sem, GeometricRelation::kBehindOf),
            "Move the red cube behind the blue cube.");
  EXPECT_EQ(canonical_description(sem, GeometricRelation::kLeftOf),
            "Move the red cube to the left of the blue cube.");
}

}  // namespace
}  // namespace vpi
