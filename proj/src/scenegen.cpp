#include "vpi/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vpi/catalog.hpp"
#include "vpi/error.hpp"
#include "vpi/layout_stats.hpp"
#include "vpi/residual.hpp"
#include "vpi/rng.hpp"

namespace vpi {

namespace {

constexpr double kGroupRingRadius = 0.07;
constexpr double kAlignSpanLo = 0.05;
constexpr double kAlignSpanHi = 0.95;
// Alignment jitter amplitude relative to the goal tolerance; demonstrations
// are visibly imperfect lines.
constexpr double kAlignJitterScale = 1.4;
constexpr double kQuadrantInset = 0.06;
// Displaced objects in fixed-length episodes start at least this far from
// their goal.
constexpr double kMinDisplacement = 0.05;

bool well_separated(const Point& p, const std::vector<Point>& others, double min_dist) {
  return std::all_of(others.begin(), others.end(),
                     [&](const Point& q) { return distance(p, q) >= min_dist; });
}

Point sample_workspace_point(Rng& rng) {
  return {rng.uniform(kWorkspaceMargin, 1.0 - kWorkspaceMargin),
          rng.uniform(kWorkspaceMargin, 1.0 - kWorkspaceMargin)};
}

std::vector<Point> group_anchors(std::size_t count, Rng& rng) {
  std::vector<Point> anchors;
  double jitter = 0.0;
  if (count <= 4) {
    anchors = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
    jitter = 0.03;
  } else if (count == 5) {
    anchors = {{0.2, 0.2}, {0.8, 0.2}, {0.2, 0.8}, {0.8, 0.8}, {0.5, 0.5}};
    jitter = 0.01;
  } else {
    throw Error(ErrorKind::kGenerationFailure,
                "cannot place " + std::to_string(count) + " groups at least 0.4 apart");
  }
  rng.shuffle(anchors.begin(), anchors.end());
  anchors.resize(count);
  for (auto& a : anchors) {
    a.x += rng.uniform(-jitter, jitter);
    a.y += rng.uniform(-jitter, jitter);
  }
  return anchors;
}

GoalConfiguration grouping_goal(const Scene& scene, PreferenceLabel label, Rng& rng) {
  const auto groups = group_indices(scene.objects, label);
  const bool has_pair = std::any_of(groups.begin(), groups.end(),
                                    [](const auto& g) { return g.size() >= 2; });
  if (groups.size() < 2 || !has_pair) {
    throw Error(ErrorKind::kGenerationFailure,
                std::string(preference_token(label)) + " is not expressible for " +
                    std::string(task_name(scene.task)));
  }
  const auto anchors = group_anchors(groups.size(), rng);
  GoalConfiguration goal;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& members = groups[g];
    if (members.size() == 1) {
      goal[scene.objects[members[0]].id] = anchors[g];
      continue;
    }
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t m = 0; m < members.size(); ++m) {
      const double angle = phase + 2.0 * std::numbers::pi * static_cast<double>(m) /
                                       static_cast<double>(members.size());
      goal[scene.objects[members[m]].id] = {anchors[g].x + kGroupRingRadius * std::cos(angle),
                                            anchors[g].y + kGroupRingRadius * std::sin(angle)};
    }
  }
  return goal;
}

// True when, for every attribute that splits the objects into groups, members
// of a group sit no closer along the line than objects do on average. Keeps
// alignment demonstrations from also reading as a grouping.
double incidental_grouping_margin(const Scene& scene, const std::vector<std::size_t>& slot_of) {
  double worst = std::numeric_limits<double>::infinity();
  const std::size_t n = scene.objects.size();
  double all_sum = 0.0;
  std::size_t all_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      all_sum += std::abs(static_cast<double>(slot_of[i]) - static_cast<double>(slot_of[j]));
      ++all_count;
    }
  }
  const double all_mean = all_sum / static_cast<double>(all_count);
  for (PreferenceLabel label : {PreferenceLabel::kGroupByColor, PreferenceLabel::kGroupByShape,
                                PreferenceLabel::kGroupByCategory}) {
    const auto groups = group_indices(scene.objects, label);
    if (groups.size() < 2) continue;
    double intra_sum = 0.0;
    std::size_t intra_count = 0;
    for (const auto& g : groups) {
      for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
          intra_sum += std::abs(static_cast<double>(slot_of[g[a]]) -
                                static_cast<double>(slot_of[g[b]]));
          ++intra_count;
        }
      }
    }
    if (intra_count == 0) continue;
    worst = std::min(worst, intra_sum / static_cast<double>(intra_count) / all_mean);
  }
  return worst;
}

GoalConfiguration alignment_goal(const Scene& scene, bool horizontal, double tolerance, Rng& rng) {
  const std::size_t n = scene.objects.size();
  std::vector<std::size_t> slot_of(n);
  for (std::size_t i = 0; i < n; ++i) slot_of[i] = i;

  std::vector<std::size_t> best = slot_of;
  double best_margin = -1.0;
  for (int attempt = 0; attempt < 2000; ++attempt) {
    rng.shuffle(slot_of.begin(), slot_of.end());
    const double margin = incidental_grouping_margin(scene, slot_of);
    if (margin > best_margin) {
      best_margin = margin;
      best = slot_of;
    }
    if (margin >= 1.0) break;
  }

  const double amplitude = kAlignJitterScale * tolerance;
  std::vector<double> offsets(n);
  do {
    for (auto& o : offsets) o = rng.uniform(-amplitude, amplitude);
  } while (population_std(offsets) >= tolerance);

  GoalConfiguration goal;
  for (std::size_t i = 0; i < n; ++i) {
    const double along = n == 1 ? 0.5
                                : kAlignSpanLo + (kAlignSpanHi - kAlignSpanLo) *
                                                     static_cast<double>(best[i]) /
                                                     static_cast<double>(n - 1);
    const double across = std::clamp(0.5 + offsets[i], 0.0, 1.0);
    goal[scene.objects[i].id] = horizontal ? Point{along, across} : Point{across, along};
  }
  return goal;
}

GoalConfiguration quadrant_goal(const Scene& scene, int quadrant, Rng& rng) {
  const std::size_t n = scene.objects.size();
  std::size_t cols = 1;
  while (cols * cols < n) ++cols;
  const std::size_t rows = (n + cols - 1) / cols;

  const double lo = 0.5 + kQuadrantInset;
  const double hi = 1.0 - kQuadrantInset;
  auto cell = [&](std::size_t k, std::size_t count) {
    return count == 1 ? 0.5 * (lo + hi)
                      : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  };
  std::vector<Point> cells;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) cells.push_back({cell(c, cols), cell(r, rows)});
  }
  rng.shuffle(cells.begin(), cells.end());

  GoalConfiguration goal;
  for (std::size_t i = 0; i < n; ++i) {
    Point p{cells[i].x + rng.uniform(-0.02, 0.02), cells[i].y + rng.uniform(-0.02, 0.02)};
    if (quadrant == 2 || quadrant == 3) p.x = 1.0 - p.x;
    if (quadrant == 3 || quadrant == 4) p.y = 1.0 - p.y;
    goal[scene.objects[i].id] = p;
  }
  return goal;
}

}  // namespace

Scene sample_scene(Task task, std::uint64_t seed) {
  const Catalog& catalog = catalog_for(task);
  Rng rng(derive_seed(seed, {tag_of("sample_scene"), static_cast<std::uint64_t>(task)}));
  Scene scene{task, {}};
  std::vector<Point> placed;
  int rejections = 0;
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    Point p = sample_workspace_point(rng);
    while (!well_separated(p, placed, kMinSeparation)) {
      if (++rejections > kMaxSampleRejections) {
        throw Error(ErrorKind::kGenerationFailure, "workspace too crowded");
      }
      p = sample_workspace_point(rng);
    }
    placed.push_back(p);
    const auto& e = catalog.entries[i];
    scene.objects.push_back({static_cast<int>(i), e.name, e.color, e.shape, e.category, p});
  }
  return scene;
}

GoalConfiguration goal_configuration(const Scene& scene, PreferenceLabel preference,
                                     std::uint64_t seed, double tolerance) {
  if (scene.objects.size() < 2) {
    throw Error(ErrorKind::kGenerationFailure, "need at least two objects");
  }
  Rng rng(derive_seed(seed, {tag_of("goal"), static_cast<std::uint64_t>(preference)}));
  GoalConfiguration goal;
  if (!is_spatial(preference)) {
    goal = grouping_goal(scene, preference, rng);
  } else if (preference == PreferenceLabel::kAlignHorizontal ||
             preference == PreferenceLabel::kAlignVertical) {
    goal = alignment_goal(scene, preference == PreferenceLabel::kAlignHorizontal, tolerance, rng);
  } else {
    goal = quadrant_goal(scene, quadrant_of(preference), rng);
  }

  const Scene final_scene = with_positions(scene, goal);
  for (std::size_t i = 0; i < final_scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < final_scene.objects.size(); ++j) {
      if (distance(final_scene.objects[i].position, final_scene.objects[j].position) <
          kMinSeparation) {
        throw Error(ErrorKind::kGenerationFailure, "goal layout violates separation");
      }
    }
  }
  if (!satisfies_preference(final_scene, preference, tolerance)) {
    throw Error(ErrorKind::kGenerationFailure, "goal layout misses its predicate");
  }
  return goal;
}

std::vector<Move> plan_moves(const Scene& scene, const GoalConfiguration& goal) {
  std::vector<int> pending;
  for (const auto& [id, target] : goal) {
    const ObjectInstance* obj = scene.find(id);
    if (obj == nullptr) {
      throw Error(ErrorKind::kUnknownObject, "goal names unknown id " + std::to_string(id));
    }
    if (obj->position != target) pending.push_back(id);
  }

  std::vector<Move> moves;
  Scene current = scene;
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const Move move{*it, goal.at(*it)};
      try {
        current = apply_move(current, move);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kInvalidResult) throw;
        ++it;
        continue;
      }
      moves.push_back(move);
      it = pending.erase(it);
      progressed = true;
    }
    if (!progressed) {
      throw Error(ErrorKind::kPlanningFailure,
                  std::to_string(pending.size()) + " objects blocked by occupied targets");
    }
  }
  return moves;
}

namespace {

// Start layout for a fixed-length episode: everything already at its goal
// except `movers`, which keep (or resample) a position away from the goal.
Scene partial_start(const Scene& sampled, const GoalConfiguration& goal,
                    const std::vector<int>& movers, Rng& rng) {
  Scene start = with_positions(sampled, goal);
  for (int id : movers) {
    auto& obj = *std::find_if(start.objects.begin(), start.objects.end(),
                              [id](const ObjectInstance& o) { return o.id == id; });
    std::vector<Point> others;
    for (const auto& o : start.objects) {
      if (o.id != id) others.push_back(o.position);
    }
    Point p = sampled.at(id).position;
    int tries = 0;
    while (!well_separated(p, others, kMinSeparation) ||
           distance(p, goal.at(id)) < kMinDisplacement) {
      if (++tries > kMaxSampleRejections) {
        throw Error(ErrorKind::kGenerationFailure, "no free start position");
      }
      p = sample_workspace_point(rng);
    }
    obj.position = p;
  }
  return start;
}

}  // namespace

EpisodeRecord generate_episode(const GenerationConfig& config) {
  const auto applicable = applicable_preferences(config.task);
  if (std::find(applicable.begin(), applicable.end(), config.preference) == applicable.end()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(preference_token(config.preference)) + " does not apply to " +
                    std::string(task_name(config.task)));
  }
  const std::size_t object_count = catalog_for(config.task).entries.size();
  if (config.n_images < 0 || config.n_images == 1 ||
      static_cast<std::size_t>(std::max(config.n_images - 1, 0)) > object_count) {
    throw Error(ErrorKind::kInvalidArgument,
                "n_images must be 0 or in [2, " + std::to_string(object_count + 1) + "]");
  }
  if (!(config.goal_tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "goal tolerance must be positive");
  }

  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt < kMaxPlanAttempts; ++attempt) {
    const auto attempt_tag = static_cast<std::uint64_t>(attempt);
    try {
      const Scene sampled =
          sample_scene(config.task, derive_seed(config.seed, {tag_of("episode"), attempt_tag}));
      const GoalConfiguration goal =
          goal_configuration(sampled, config.preference,
                             derive_seed(config.seed, {tag_of("goal"), attempt_tag}),
                             config.goal_tolerance);

      Scene start = sampled;
      if (config.n_images > 0) {
        Rng rng(derive_seed(config.seed, {tag_of("movers"), attempt_tag}));
        std::vector<int> ids;
        for (const auto& o : sampled.objects) ids.push_back(o.id);
        rng.shuffle(ids.begin(), ids.end());
        ids.resize(static_cast<std::size_t>(config.n_images - 1));
        std::sort(ids.begin(), ids.end());
        start = partial_start(sampled, goal, ids, rng);
      }

      EpisodeRecord ep;
      ep.label = config.preference;
      ep.seed = config.seed;
      ep.moves = plan_moves(start, goal);
      ep.scenes.push_back(start);
      for (const auto& m : ep.moves) {
        ep.scenes.push_back(apply_move(ep.scenes.back(), m));
        ep.ground_truth_residuals.push_back(
            ground_truth_residual(ep.scenes[ep.scenes.size() - 2], ep.scenes.back()));
      }
      if (ep.moves.empty()) {
        last_failure = "start layout already matches goal";
        continue;
      }
      if (config.n_images > 0 && ep.scenes.size() != static_cast<std::size_t>(config.n_images)) {
        last_failure = "plan length differs from n_images";
        continue;
      }
      if (!satisfies_preference(ep.scenes.back(), config.preference, config.goal_tolerance)) {
        last_failure = "final scene misses predicate";
        continue;
      }
      return ep;
    } catch (const Error& err) {
      switch (err.kind()) {
        case ErrorKind::kPlanningFailure:
        case ErrorKind::kNoMove:
        case ErrorKind::kMultipleMoves:
        case ErrorKind::kInvalidResult:
          last_failure = err.what();
          continue;
        default:
          throw;
      }
    }
  }
  throw Error(ErrorKind::kPlanningFailure, "gave up after " + std::to_string(kMaxPlanAttempts) +
                                               " attempts: " + last_failure);
}

bool satisfies_preference(const Scene& scene, PreferenceLabel preference, double tolerance) {
  const auto& objs = scene.objects;
  if (objs.empty()) return false;
  switch (preference) {
    case PreferenceLabel::kAlignHorizontal: return population_std(ys(objs)) < tolerance;
    case PreferenceLabel::kAlignVertical: return population_std(xs(objs)) < tolerance;
    case PreferenceLabel::kClusterQuadrant1:
    case PreferenceLabel::kClusterQuadrant2:
    case PreferenceLabel::kClusterQuadrant3:
    case PreferenceLabel::kClusterQuadrant4: {
      const int q = quadrant_of(preference);
      return std::all_of(objs.begin(), objs.end(),
                         [q](const ObjectInstance& o) { return in_quadrant(o.position, q); });
    }
    default: break;
  }

  const auto groups = group_indices(objs, preference);
  if (groups.size() < 2) return false;
  std::vector<std::size_t> group_of(objs.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i : groups[g]) group_of[i] = g;
  }
  double max_intra = -1.0;
  double min_inter = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = i + 1; j < objs.size(); ++j) {
      const double d = distance(objs[i].position, objs[j].position);
      if (group_of[i] == group_of[j]) {
        max_intra = std::max(max_intra, d);
      } else {
        min_inter = std::min(min_inter, d);
      }
    }
  }
  return max_intra >= 0.0 && max_intra < min_inter;
}

Scene with_positions(const Scene& scene, const GoalConfiguration& positions) {
  Scene out = scene;
  for (auto& obj : out.objects) {
    if (auto it = positions.find(obj.id); it != positions.end()) obj.position = it->second;
  }
  return out;
}

}  // namespace vpi
