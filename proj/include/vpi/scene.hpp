#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vpi {

/// Minimum pairwise distance between object centers in a valid scene.
inline constexpr double kMinSeparation = 0.02;

enum class Task { kBlock, kPolygon, kHousehold };

inline constexpr std::array<Task, 3> kAllTasks = {Task::kBlock, Task::kPolygon,
                                                  Task::kHousehold};

std::string_view task_name(Task task);
Task parse_task(std::string_view text);

/// Table frame: x grows to the right, y grows away from the viewer.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct ObjectInstance {
  int id = 0;
  std::string name;
  std::string color;
  std::string shape;
  std::string category;
  Point position;

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

struct Scene {
  Task task = Task::kBlock;
  std::vector<ObjectInstance> objects;

  const ObjectInstance* find(int id) const;
  const ObjectInstance& at(int id) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct Move {
  int object_id = 0;
  Point target_position;

  friend bool operator==(const Move&, const Move&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Reports every violated scene invariant: workspace bounds, minimum
/// separation, id uniqueness, catalog membership and object count.
ValidationReport validate_scene(const Scene& scene);

/// Returns a copy of `scene` with one object relocated. Throws
/// kUnknownObject for a missing id and kInvalidResult when the resulting
/// scene fails validation.
Scene apply_move(const Scene& scene, const Move& move);

enum class GeometricRelation { kLeftOf, kRightOf, kInFrontOf, kBehindOf };

inline constexpr std::array<GeometricRelation, 4> kAllRelations = {
    GeometricRelation::kLeftOf, GeometricRelation::kRightOf,
    GeometricRelation::kInFrontOf, GeometricRelation::kBehindOf};

/// "to the left of", "to the right of", "in front of", "behind of".
std::string_view relation_phrase(GeometricRelation relation);
/// "left_of", "right_of", "in_front_of", "behind_of".
std::string_view relation_token(GeometricRelation relation);
/// Phrase used inside a move description; "behind" drops the trailing "of".
std::string_view relation_description_phrase(GeometricRelation relation);
/// Accepts phrases and snake_case aliases, case-insensitively.
std::optional<GeometricRelation> try_parse_relation(std::string_view text);
GeometricRelation parse_relation(std::string_view text);

enum class PreferenceLabel {
  kGroupByColor,
  kGroupByShape,
  kGroupByCategory,
  kAlignHorizontal,
  kAlignVertical,
  kClusterQuadrant1,
  kClusterQuadrant2,
  kClusterQuadrant3,
  kClusterQuadrant4,
};

inline constexpr std::array<PreferenceLabel, 9> kAllPreferences = {
    PreferenceLabel::kGroupByColor,     PreferenceLabel::kGroupByShape,
    PreferenceLabel::kGroupByCategory,  PreferenceLabel::kAlignHorizontal,
    PreferenceLabel::kAlignVertical,    PreferenceLabel::kClusterQuadrant1,
    PreferenceLabel::kClusterQuadrant2, PreferenceLabel::kClusterQuadrant3,
    PreferenceLabel::kClusterQuadrant4};

/// snake_case identifier, e.g. "group_by_color".
std::string_view preference_token(PreferenceLabel label);
std::string_view preference_sentence(PreferenceLabel label);
/// Matches a canonical sentence or a snake_case token, ignoring case,
/// punctuation and surrounding whitespace. Throws kUnknownPreference.
PreferenceLabel parse_preference(std::string_view text);
std::optional<PreferenceLabel> try_parse_preference(std::string_view text);

bool is_spatial(PreferenceLabel label);
/// 1..4 for cluster_quadrant_*, 0 otherwise.
int quadrant_of(PreferenceLabel label);
/// Quadrant q strictly contains p (Q1 = x>0.5, y>0.5, counter-clockwise).
bool in_quadrant(const Point& p, int quadrant);

/// Lowercases, maps punctuation to spaces, collapses runs of whitespace.
std::string normalize_text(std::string_view text);

}  // namespace vpi
