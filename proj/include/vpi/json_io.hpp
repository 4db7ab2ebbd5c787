#pragma once

// nlohmann/json conversions for the domain types. Enums serialize as their
// snake_case tokens and points as [x, y] arrays.

#include <nlohmann/json.hpp>

#include "vpi/episode.hpp"
#include "vpi/residual.hpp"
#include "vpi/scene.hpp"

namespace vpi {

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const ObjectInstance& o);
void from_json(const nlohmann::json& j, ObjectInstance& o);
void to_json(nlohmann::json& j, const Scene& s);
void from_json(const nlohmann::json& j, Scene& s);
void to_json(nlohmann::json& j, const Move& m);
void from_json(const nlohmann::json& j, Move& m);
void to_json(nlohmann::json& j, const ObjectDescriptor& d);
void from_json(const nlohmann::json& j, ObjectDescriptor& d);
void to_json(nlohmann::json& j, const VisualResidual& r);
void from_json(const nlohmann::json& j, VisualResidual& r);
void to_json(nlohmann::json& j, const EpisodeRecord& e);
void from_json(const nlohmann::json& j, EpisodeRecord& e);

}  // namespace vpi
