#include "vpi/residual.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "vpi/error.hpp"

namespace vpi {

ObjectDescriptor describe(const ObjectInstance& obj) {
  return {obj.name, obj.color, obj.shape};
}

int detect_moved_object(const Scene& before, const Scene& after) {
  std::set<int> before_ids;
  for (const auto& obj : before.objects) before_ids.insert(obj.id);
  std::set<int> after_ids;
  for (const auto& obj : after.objects) after_ids.insert(obj.id);
  if (before_ids != after_ids || before.task != after.task) {
    throw Error(ErrorKind::kInvalidArgument, "scenes do not share the same objects");
  }

  int moved = -1;
  int count = 0;
  for (const auto& obj : before.objects) {
    if (distance(obj.position, after.at(obj.id).position) > kMoveThreshold) {
      moved = obj.id;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorKind::kNoMove, "no object moved");
  if (count > 1) {
    throw Error(ErrorKind::kMultipleMoves, std::to_string(count) + " objects moved");
  }
  return moved;
}

int select_target_object(const Scene& after, int source_id) {
  const Point origin = after.at(source_id).position;
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& obj : after.objects) {
    if (obj.id == source_id) continue;
    const double d = distance(origin, obj.position);
    if (d < best_dist || (d == best_dist && obj.id < best)) {
      best = obj.id;
      best_dist = d;
    }
  }
  if (best < 0) throw Error(ErrorKind::kInvalidArgument, "scene has a single object");
  return best;
}

GeometricRelation classify_relation(const Point& source, const Point& target) {
  const double dx = source.x - target.x;
  const double dy = source.y - target.y;
  if (dx == 0.0 && dy == 0.0) {
    throw Error(ErrorKind::kCoincidentPositions, "source and target share a position");
  }
  if (std::abs(dx) >= std::abs(dy)) {
    return dx > 0.0 ? GeometricRelation::kRightOf : GeometricRelation::kLeftOf;
  }
  return dy > 0.0 ? GeometricRelation::kBehindOf : GeometricRelation::kInFrontOf;
}

std::string canonical_description(const SemanticProperty& semantic, GeometricRelation geometric) {
  std::string out = "Move the ";
  out += semantic.source.name;
  out += ' ';
  out += relation_description_phrase(geometric);
  out += " the ";
  out += semantic.target.name;
  out += '.';
  return out;
}

VisualResidual ground_truth_residual(const Scene& before, const Scene& after) {
  const int source_id = detect_moved_object(before, after);
  const int target_id = select_target_object(after, source_id);
  const auto& source = after.at(source_id);
  const auto& target = after.at(target_id);

  VisualResidual r;
  r.semantic = {describe(source), describe(target)};
  r.geometric = classify_relation(source.position, target.position);
  r.description = canonical_description(r.semantic, r.geometric);
  return r;
}

}  // namespace vpi
