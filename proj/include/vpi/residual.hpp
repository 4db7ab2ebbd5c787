#pragma once

#include <string>

#include "vpi/scene.hpp"

namespace vpi {

/// Displacement above which an object counts as moved between two scenes.
inline constexpr double kMoveThreshold = 0.01;

struct ObjectDescriptor {
  std::string name;
  std::string color;
  std::string shape;

  friend bool operator==(const ObjectDescriptor&, const ObjectDescriptor&) = default;
};

struct SemanticProperty {
  ObjectDescriptor source;
  ObjectDescriptor target;

  friend bool operator==(const SemanticProperty&, const SemanticProperty&) = default;
};

/// What changed between two consecutive scenes: which object moved next to
/// which (semantic), the resulting relation (geometric) and a one-sentence
/// summary (description). `unparsed` marks a placeholder for a response that
/// could not be parsed; such residuals never match ground truth.
struct VisualResidual {
  SemanticProperty semantic;
  GeometricRelation geometric = GeometricRelation::kLeftOf;
  std::string description;
  bool unparsed = false;

  static VisualResidual unparsed_sentinel() {
    VisualResidual r;
    r.unparsed = true;
    return r;
  }

  friend bool operator==(const VisualResidual&, const VisualResidual&) = default;
};

ObjectDescriptor describe(const ObjectInstance& obj);

/// The unique object displaced by more than kMoveThreshold.
/// Throws kNoMove or kMultipleMoves.
int detect_moved_object(const Scene& before, const Scene& after);

/// Nearest other object to `source_id` in `after`; ties go to the smaller id.
int select_target_object(const Scene& after, int source_id);

/// Dominant-axis classification of where `source` sits relative to `target`.
/// Horizontal wins when |dx| == |dy|. Throws kCoincidentPositions.
GeometricRelation classify_relation(const Point& source, const Point& target);

/// "Move the {source} {relation} the {target}."
std::string canonical_description(const SemanticProperty& semantic, GeometricRelation geometric);

VisualResidual ground_truth_residual(const Scene& before, const Scene& after);

}  // namespace vpi
