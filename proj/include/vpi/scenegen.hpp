#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "vpi/episode.hpp"
#include "vpi/scene.hpp"

namespace vpi {

/// How closely a goal layout must realize its preference (alignment spread,
/// grouping margins are strict inequalities on top of it).
inline constexpr double kGoalTolerance = 0.05;

/// Sampled positions stay this far from the table edge so glyphs render whole.
inline constexpr double kWorkspaceMargin = 0.05;

/// Rejection budget for sample_scene.
inline constexpr int kMaxSampleRejections = 10'000;

/// Goal-layout attempts before generate_episode gives up.
inline constexpr int kMaxPlanAttempts = 10;

struct GenerationConfig {
  Task task = Task::kBlock;
  PreferenceLabel preference = PreferenceLabel::kAlignHorizontal;
  std::uint64_t seed = 0;
  /// 0 means "as many images as the plan needs".
  int n_images = 0;
  double goal_tolerance = kGoalTolerance;
};

using GoalConfiguration = std::map<int, Point>;

Scene sample_scene(Task task, std::uint64_t seed);

/// Target position for every object such that the final layout realizes
/// `preference`. Throws kGenerationFailure when the preference cannot be
/// expressed with this task's catalog.
GoalConfiguration goal_configuration(const Scene& scene, PreferenceLabel preference,
                                     std::uint64_t seed, double tolerance = kGoalTolerance);

/// One move per displaced object, ascending id, deferring any object whose
/// target is still occupied. Throws kPlanningFailure on deadlock.
std::vector<Move> plan_moves(const Scene& scene, const GoalConfiguration& goal);

/// Seeded, labeled episode ending in a layout that satisfies the preference.
EpisodeRecord generate_episode(const GenerationConfig& config);

/// Preference predicates evaluated on a scene:
///   grouping  - largest intra-group distance < smallest inter-group distance
///   alignment - population std of y (horizontal) or x (vertical) < tolerance
///   quadrant  - every object strictly inside the quadrant
bool satisfies_preference(const Scene& scene, PreferenceLabel preference,
                          double tolerance = kGoalTolerance);

Scene with_positions(const Scene& scene, const GoalConfiguration& positions);

}  // namespace vpi
