#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vpi/residual.hpp"
#include "vpi/scene.hpp"

namespace vpi {

inline constexpr const char* kEpisodeSchema = "episode/v1";

/// A labeled demonstration: scenes[k + 1] == apply_move(scenes[k], moves[k])
/// and ground_truth_residuals[k] describes that transition.
struct EpisodeRecord {
  std::vector<Scene> scenes;
  std::vector<Move> moves;
  std::vector<VisualResidual> ground_truth_residuals;
  PreferenceLabel label = PreferenceLabel::kGroupByColor;
  std::uint64_t seed = 0;
  std::optional<std::vector<std::string>> image_paths;

  Task task() const { return scenes.empty() ? Task::kBlock : scenes.front().task; }

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

/// Lists every broken episode invariant (replay, lengths, residual agreement).
std::vector<std::string> check_episode(const EpisodeRecord& episode);

std::string episode_to_json(const EpisodeRecord& episode, int indent = 2);
/// Throws kParseError on malformed documents or an unexpected schema tag.
EpisodeRecord episode_from_json(const std::string& text);

EpisodeRecord load_episode(const std::string& path);
void save_episode(const EpisodeRecord& episode, const std::string& path);

}  // namespace vpi
