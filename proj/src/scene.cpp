#include "vpi/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "vpi/catalog.hpp"
#include "vpi/error.hpp"

namespace vpi {

std::string_view task_name(Task task) {
  switch (task) {
    case Task::kBlock: return "block";
    case Task::kPolygon: return "polygon";
    case Task::kHousehold: return "household";
  }
  return "block";
}

Task parse_task(std::string_view text) {
  const std::string norm = normalize_text(text);
  for (Task t : kAllTasks) {
    if (norm == task_name(t)) return t;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown task '" + std::string(text) + "'");
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

const ObjectInstance* Scene::find(int id) const {
  auto it = std::find_if(objects.begin(), objects.end(),
                         [id](const ObjectInstance& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

const ObjectInstance& Scene::at(int id) const {
  const ObjectInstance* obj = find(id);
  if (obj == nullptr) {
    throw Error(ErrorKind::kUnknownObject, "no object with id " + std::to_string(id));
  }
  return *obj;
}

namespace {

bool in_unit_square(const Point& p) {
  return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
}

}  // namespace

ValidationReport validate_scene(const Scene& scene) {
  ValidationReport report;
  auto& out = report.violations;
  const Catalog& catalog = catalog_for(scene.task);

  if (scene.objects.size() != catalog.entries.size()) {
    std::ostringstream msg;
    msg << "object count " << scene.objects.size() << " does not match "
        << task_name(scene.task) << " catalog size " << catalog.entries.size();
    out.push_back(msg.str());
  }

  std::set<int> seen;
  for (const auto& obj : scene.objects) {
    const std::string tag = "object " + std::to_string(obj.id) + ": ";
    if (!seen.insert(obj.id).second) {
      out.push_back(tag + "duplicate id");
    }
    if (!std::isfinite(obj.position.x) || !std::isfinite(obj.position.y) ||
        !in_unit_square(obj.position)) {
      out.push_back(tag + "position out of bounds");
    }
    if (obj.name.empty() || obj.color.empty() || obj.shape.empty() || obj.category.empty()) {
      out.push_back(tag + "empty attribute");
      continue;
    }
    const int idx = catalog.index_of(obj.name);
    if (idx < 0) {
      out.push_back(tag + "name '" + obj.name + "' not in catalog");
      continue;
    }
    const auto& entry = catalog.entries[static_cast<std::size_t>(idx)];
    if (entry.color != obj.color || entry.shape != obj.shape || entry.category != obj.category) {
      out.push_back(tag + "attributes do not match catalog entry '" + entry.name + "'");
    }
  }

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      const auto& a = scene.objects[i];
      const auto& b = scene.objects[j];
      if (distance(a.position, b.position) < kMinSeparation) {
        std::ostringstream msg;
        msg << "objects " << a.id << " and " << b.id << ": separation < " << kMinSeparation;
        out.push_back(msg.str());
      }
    }
  }
  return report;
}

Scene apply_move(const Scene& scene, const Move& move) {
  Scene next = scene;
  auto it = std::find_if(next.objects.begin(), next.objects.end(),
                         [&](const ObjectInstance& o) { return o.id == move.object_id; });
  if (it == next.objects.end()) {
    throw Error(ErrorKind::kUnknownObject, "no object with id " + std::to_string(move.object_id));
  }
  it->position = move.target_position;
  ValidationReport report = validate_scene(next);
  if (!report.ok()) {
    std::string joined;
    for (const auto& v : report.violations) {
      if (!joined.empty()) joined += "; ";
      joined += v;
    }
    throw Error(ErrorKind::kInvalidResult, joined);
  }
  return next;
}

std::string_view relation_phrase(GeometricRelation relation) {
  switch (relation) {
    case GeometricRelation::kLeftOf: return "to the left of";
    case GeometricRelation::kRightOf: return "to the right of";
    case GeometricRelation::kInFrontOf: return "in front of";
    case GeometricRelation::kBehindOf: return "behind of";
  }
  return "";
}

std::string_view relation_token(GeometricRelation relation) {
  switch (relation) {
    case GeometricRelation::kLeftOf: return "left_of";
    case GeometricRelation::kRightOf: return "right_of";
    case GeometricRelation::kInFrontOf: return "in_front_of";
    case GeometricRelation::kBehindOf: return "behind_of";
  }
  return "";
}

std::string_view relation_description_phrase(GeometricRelation relation) {
  if (relation == GeometricRelation::kBehindOf) return "behind";
  return relation_phrase(relation);
}

std::optional<GeometricRelation> try_parse_relation(std::string_view text) {
  // Underscores count as separators, so "in_front_of" normalizes like the phrase.
  std::string norm = normalize_text(text);
  if (norm.starts_with("is ")) norm.erase(0, 3);
  if (norm.starts_with("to the ")) norm.erase(0, 7);
  if (norm.starts_with("the ")) norm.erase(0, 4);
  if (norm == "left of" || norm == "left") return GeometricRelation::kLeftOf;
  if (norm == "right of" || norm == "right") return GeometricRelation::kRightOf;
  if (norm == "in front of" || norm == "front of" || norm == "in front") {
    return GeometricRelation::kInFrontOf;
  }
  if (norm == "behind of" || norm == "behind") return GeometricRelation::kBehindOf;
  return std::nullopt;
}

GeometricRelation parse_relation(std::string_view text) {
  if (auto rel = try_parse_relation(text)) return *rel;
  throw Error(ErrorKind::kUnknownRelation, "'" + std::string(text) + "'");
}

std::string_view preference_token(PreferenceLabel label) {
  switch (label) {
    case PreferenceLabel::kGroupByColor: return "group_by_color";
    case PreferenceLabel::kGroupByShape: return "group_by_shape";
    case PreferenceLabel::kGroupByCategory: return "group_by_category";
    case PreferenceLabel::kAlignHorizontal: return "align_horizontal";
    case PreferenceLabel::kAlignVertical: return "align_vertical";
    case PreferenceLabel::kClusterQuadrant1: return "cluster_quadrant_1";
    case PreferenceLabel::kClusterQuadrant2: return "cluster_quadrant_2";
    case PreferenceLabel::kClusterQuadrant3: return "cluster_quadrant_3";
    case PreferenceLabel::kClusterQuadrant4: return "cluster_quadrant_4";
  }
  return "";
}

std::string_view preference_sentence(PreferenceLabel label) {
  switch (label) {
    case PreferenceLabel::kGroupByColor: return "Rearrange objects with the same color.";
    case PreferenceLabel::kGroupByShape: return "Group objects by the same shape.";
    case PreferenceLabel::kGroupByCategory: return "Group objects by the same category.";
    case PreferenceLabel::kAlignHorizontal: return "Make objects into a horizontal line.";
    case PreferenceLabel::kAlignVertical: return "Sort objects vertically.";
    case PreferenceLabel::kClusterQuadrant1: return "Gather objects in the top-right quadrant.";
    case PreferenceLabel::kClusterQuadrant2: return "Gather objects in the top-left quadrant.";
    case PreferenceLabel::kClusterQuadrant3: return "Gather objects in the bottom-left quadrant.";
    case PreferenceLabel::kClusterQuadrant4: return "Gather objects in the bottom-right quadrant.";
  }
  return "";
}

std::optional<PreferenceLabel> try_parse_preference(std::string_view text) {
  const std::string norm = normalize_text(text);
  if (norm.empty()) return std::nullopt;
  for (PreferenceLabel label : kAllPreferences) {
    if (norm == normalize_text(preference_sentence(label)) ||
        norm == normalize_text(preference_token(label))) {
      return label;
    }
  }
  return std::nullopt;
}

PreferenceLabel parse_preference(std::string_view text) {
  if (auto label = try_parse_preference(text)) return *label;
  throw Error(ErrorKind::kUnknownPreference, "'" + std::string(text) + "'");
}

bool is_spatial(PreferenceLabel label) {
  return label != PreferenceLabel::kGroupByColor && label != PreferenceLabel::kGroupByShape &&
         label != PreferenceLabel::kGroupByCategory;
}

int quadrant_of(PreferenceLabel label) {
  switch (label) {
    case PreferenceLabel::kClusterQuadrant1: return 1;
    case PreferenceLabel::kClusterQuadrant2: return 2;
    case PreferenceLabel::kClusterQuadrant3: return 3;
    case PreferenceLabel::kClusterQuadrant4: return 4;
    default: return 0;
  }
}

bool in_quadrant(const Point& p, int quadrant) {
  switch (quadrant) {
    case 1: return p.x > 0.5 && p.y > 0.5;
    case 2: return p.x < 0.5 && p.y > 0.5;
    case 3: return p.x < 0.5 && p.y < 0.5;
    case 4: return p.x > 0.5 && p.y < 0.5;
    default: return false;
  }
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

}  // namespace vpi
