#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vpi/catalog.hpp"
#include "vpi/error.hpp"
#include "vpi/rng.hpp"
#include "vpi/scene.hpp"
#include "vpi/scenegen.hpp"

namespace vpi {
namespace {

using testing::grid_scene;
using testing::kind_of;

bool has_violation(const ValidationReport& r, std::string_view needle) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

TEST(ValidateScene, GridScenesAreValid) {
  for (Task t : kAllTasks) {
    EXPECT_TRUE(validate_scene(grid_scene(t)).ok()) << task_name(t);
  }
}

TEST(ValidateScene, ReportsEveryViolation) {
  Scene s = grid_scene(Task::kBlock);
  s.objects[0].position = {1.2, 0.5};
  s.objects[2].position = s.objects[1].position;
  s.objects[2].position.x += 0.01;
  s.objects[3].id = s.objects[4].id;
  s.objects[5].name = "teapot";
  const ValidationReport r = validate_scene(s);
  EXPECT_TRUE(has_violation(r, "position out of bounds"));
  EXPECT_TRUE(has_violation(r, "separation < 0.02"));
  EXPECT_TRUE(has_violation(r, "duplicate id"));
  EXPECT_TRUE(has_violation(r, "not in catalog"));
  EXPECT_EQ(r.violations.size(), 4u);
}

TEST(ValidateScene, ObjectCountMustMatchCatalog) {
  Scene s = grid_scene(Task::kPolygon);
  s.objects.pop_back();
  EXPECT_TRUE(has_violation(validate_scene(s), "object count"));
}

TEST(ValidateScene, NonFinitePositionIsOutOfBounds) {
  Scene s = grid_scene(Task::kBlock);
  s.objects[1].position.x = std::nan("");
  EXPECT_TRUE(has_violation(validate_scene(s), "position out of bounds"));
}

TEST(ValidateScene, SeparationExactlyAtThresholdIsAllowed) {
  Scene s = grid_scene(Task::kBlock);
  s.objects[1].position = {s.objects[0].position.x + 0.025, s.objects[0].position.y};
  EXPECT_TRUE(validate_scene(s).ok());
  s.objects[1].position = {s.objects[0].position.x + 0.015, s.objects[0].position.y};
  EXPECT_FALSE(validate_scene(s).ok());
}

TEST(ApplyMove, RelocatesOnlyTheMovedObject) {
  const Scene s = grid_scene(Task::kHousehold);
  const Scene next = apply_move(s, {3, {0.42, 0.77}});
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    if (s.objects[i].id == 3) {
      EXPECT_EQ(next.objects[i].position, (Point{0.42, 0.77}));
    } else {
      EXPECT_EQ(next.objects[i], s.objects[i]);
    }
  }
}

TEST(ApplyMove, UnknownObject) {
  EXPECT_EQ(kind_of([] { apply_move(grid_scene(Task::kBlock), {99, {0.5, 0.5}}); }),
            ErrorKind::kUnknownObject);
}

TEST(ApplyMove, OverlapIsInvalidResult) {
  const Scene s = grid_scene(Task::kBlock);
  const Point onto = s.objects[1].position;
  EXPECT_EQ(kind_of([&] { apply_move(s, {0, onto}); }), ErrorKind::kInvalidResult);
}

TEST(ApplyMove, OutOfBoundsIsInvalidResult) {
  EXPECT_EQ(kind_of([] { apply_move(grid_scene(Task::kBlock), {0, {-0.1, 0.5}}); }),
            ErrorKind::kInvalidResult);
}

// Random moves: accepted exactly when a brute-force check of bounds and
// pairwise distances passes, and accepted results stay valid.
TEST(ApplyMove, AcceptanceMatchesBruteForceCheck) {
  Rng rng(2024);
  int accepted = 0;
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Task task = kAllTasks[trial % 3];
    const Scene s = sample_scene(task, static_cast<std::uint64_t>(trial / 10));
    const int id = static_cast<int>(rng.below(s.objects.size()));
    const Point p{rng.uniform(-0.05, 1.05), rng.uniform(-0.05, 1.05)};

    bool ok = p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
    for (const auto& o : s.objects) {
      if (o.id == id) continue;
      const double d = std::sqrt((o.position.x - p.x) * (o.position.x - p.x) +
                                 (o.position.y - p.y) * (o.position.y - p.y));
      if (d < 0.02) ok = false;
    }
    try {
      const Scene next = apply_move(s, {id, p});
      EXPECT_TRUE(ok);
      EXPECT_TRUE(validate_scene(next).ok());
      ++accepted;
    } catch (const Error& err) {
      EXPECT_FALSE(ok);
      EXPECT_EQ(err.kind(), ErrorKind::kInvalidResult);
      ++rejected;
    }
  }
  EXPECT_GT(accepted, 100);
  EXPECT_GT(rejected, 100);
}

TEST(Relation, PhrasesAndTokensRoundTrip) {
  for (GeometricRelation r : kAllRelations) {
    EXPECT_EQ(parse_relation(relation_phrase(r)), r);
    EXPECT_EQ(parse_relation(relation_token(r)), r);
  }
  EXPECT_EQ(relation_phrase(GeometricRelation::kBehindOf), "behind of");
  EXPECT_EQ(relation_description_phrase(GeometricRelation::kBehindOf), "behind");
  EXPECT_EQ(parse_relation("  In Front Of "), GeometricRelation::kInFrontOf);
  EXPECT_EQ(kind_of([] { parse_relation("above"); }), ErrorKind::kUnknownRelation);
}

TEST(Preference, SentencesAndTokensRoundTrip) {
  for (PreferenceLabel p : kAllPreferences) {
    EXPECT_EQ(parse_preference(preference_sentence(p)), p);
    EXPECT_EQ(parse_preference(preference_token(p)), p);
  }
  EXPECT_EQ(parse_preference("rearrange objects with the same color"),
            PreferenceLabel::kGroupByColor);
  EXPECT_EQ(kind_of([] { parse_preference("stack everything"); }),
            ErrorKind::kUnknownPreference);
  EXPECT_FALSE(try_parse_preference("").has_value());
}

TEST(Preference, SentencesAreDistinct) {
  for (PreferenceLabel a : kAllPreferences) {
    for (PreferenceLabel b : kAllPreferences) {
      if (a != b) EXPECT_NE(normalize_text(preference_sentence(a)),
                            normalize_text(preference_sentence(b)));
    }
  }
}

TEST(Preference, QuadrantMembershipIsStrict) {
  EXPECT_TRUE(in_quadrant({0.6, 0.6}, 1));
  EXPECT_TRUE(in_quadrant({0.4, 0.6}, 2));
  EXPECT_TRUE(in_quadrant({0.4, 0.4}, 3));
  EXPECT_TRUE(in_quadrant({0.6, 0.4}, 4));
  EXPECT_FALSE(in_quadrant({0.5, 0.6}, 1));
  EXPECT_FALSE(in_quadrant({0.6, 0.5}, 4));
  EXPECT_EQ(quadrant_of(PreferenceLabel::kClusterQuadrant3), 3);
  EXPECT_EQ(quadrant_of(PreferenceLabel::kAlignVertical), 0);
  EXPECT_FALSE(is_spatial(PreferenceLabel::kGroupByCategory));
  EXPECT_TRUE(is_spatial(PreferenceLabel::kClusterQuadrant2));
}

TEST(Task, NamesRoundTrip) {
  for (Task t : kAllTasks) EXPECT_EQ(parse_task(task_name(t)), t);
  EXPECT_EQ(parse_task("Household"), Task::kHousehold);
  EXPECT_EQ(kind_of([] { parse_task("kitchen"); }), ErrorKind::kInvalidArgument);
}

TEST(NormalizeText, CollapsesPunctuationAndCase) {
  EXPECT_EQ(normalize_text("  Hello,   World!! "), "hello world");
  EXPECT_EQ(normalize_text("group_by_color"), "group by color");
  EXPECT_EQ(normalize_text(""), "");
}

TEST(Catalog, IdsAreIndicesAndAttributesComeFromFixedSets) {
  const auto colors = palette_colors();
  const auto shapes = shape_tokens();
  for (Task t : kAllTasks) {
    const Catalog& c = catalog_for(t);
    EXPECT_FALSE(c.entries.empty());
    for (std::size_t i = 0; i < c.entries.size(); ++i) {
      EXPECT_EQ(c.index_of(c.entries[i].name), static_cast<int>(i));
      EXPECT_NE(std::find(colors.begin(), colors.end(), c.entries[i].color), colors.end());
      EXPECT_NE(std::find(shapes.begin(), shapes.end(), c.entries[i].shape), shapes.end());
    }
  }
  EXPECT_EQ(catalog_for(Task::kBlock).entries.size(), 6u);
  EXPECT_EQ(catalog_for(Task::kPolygon).entries.size(), 6u);
  EXPECT_EQ(catalog_for(Task::kHousehold).entries.size(), 12u);
}

TEST(Catalog, ApplicablePreferences) {
  const auto block = applicable_preferences(Task::kBlock);
  EXPECT_TRUE(std::all_of(block.begin(), block.end(), is_spatial));
  EXPECT_EQ(block.size(), 6u);
  const auto polygon = applicable_preferences(Task::kPolygon);
  EXPECT_NE(std::find(polygon.begin(), polygon.end(), PreferenceLabel::kGroupByColor),
            polygon.end());
  EXPECT_NE(std::find(polygon.begin(), polygon.end(), PreferenceLabel::kGroupByShape),
            polygon.end());
  EXPECT_EQ(applicable_preferences(Task::kHousehold).size(), 9u);
}

}  // namespace
}  // namespace vpi
