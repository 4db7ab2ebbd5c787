#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vpi/backend.hpp"
#include "vpi/covr.hpp"
#include "vpi/scene.hpp"

namespace vpi {

struct MdpeConfig {
  /// Per-label weight; labels absent from the map weigh 1.
  std::map<PreferenceLabel, double> weights;
  /// Spread at which an alignment feature reaches zero.
  double align_threshold = 0.08;
  /// Minimum lead of the best normalized score over the runner-up.
  double ambiguity_margin = 0.05;

  double weight(PreferenceLabel label) const;
  /// Throws kInvalidArgument on non-positive threshold, negative margin or weight.
  void validate() const;
};

/// Score in [0, 1] per preference label, indexed by enum order.
struct FeatureVector {
  std::array<double, kAllPreferences.size()> scores{};

  double operator[](PreferenceLabel label) const {
    return scores[static_cast<std::size_t>(label)];
  }
  double& operator[](PreferenceLabel label) { return scores[static_cast<std::size_t>(label)]; }
};

/// Mutual-distance features:
///   grouping:  clamp(1 - mean intra-group distance / mean pairwise distance, 0, 1),
///              0 unless the attribute forms two or more groups, one with 2+ members
///   alignment: max(0, 1 - population std / align_threshold)
///   quadrant:  clamp(2 * fraction inside - 1, 0, 1)
FeatureVector mdpe_features(const Scene& scene, const MdpeConfig& config = {});

struct MdpeDecision {
  /// Set when one label leads every other by more than the margin.
  std::optional<PreferenceLabel> label;
  /// Labels within the margin of the best when there is no clear winner.
  std::vector<PreferenceLabel> tied;
  /// Weighted scores, best first (enum order among equals).
  std::vector<std::pair<PreferenceLabel, double>> ranked;

  bool ambiguous() const { return !label.has_value(); }
};

/// Scores are divided by the largest score before the margin test, so
/// scaling every weight by a positive constant never changes the outcome.
MdpeDecision mdpe_infer(const FeatureVector& features, const MdpeConfig& config = {});

InferenceResult infer_preference_mdpe(const Scene& final_scene, const MdpeConfig& config = {});

/// Single request carrying every image and the preference set, without the
/// structured residual format.
PromptBundle build_naive_prompt(std::span<const Png> images);
InferenceResult infer_preference_naive(std::span<const Png> images, MllmBackend& backend,
                                       const RetryPolicy& retry = {},
                                       const DecodingParams& decoding = {});

/// Position request for the last image in the sequence.
PromptBundle build_position_prompt(std::span<const Png> images, const Vocabulary& vocabulary);

/// Reads "name: (x, y)" lines, clamping coordinates into [0, 1]. Throws
/// kMalformedResponse when no line has that shape.
std::vector<std::pair<std::string, Point>> parse_position_response(const std::string& text);

std::map<std::string, Point> l2r_extract_positions(std::span<const Png> images,
                                                   MllmBackend& backend, Task task,
                                                   std::vector<TranscriptEntry>* transcript = nullptr,
                                                   const DecodingParams& decoding = {});

/// Rebuilds a scene from extracted positions (names looked up in the task
/// catalog, unknown names dropped) and scores it with the MDPE features.
/// Throws kEmptyScene when no name resolves.
InferenceResult infer_preference_l2r(std::span<const Png> images, MllmBackend& backend, Task task,
                                     const MdpeConfig& config = {},
                                     const DecodingParams& decoding = {});

Scene scene_from_positions(const std::map<std::string, Point>& positions, Task task);

}  // namespace vpi
