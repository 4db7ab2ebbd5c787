#include "vpi/episode.hpp"

#include <fstream>
#include <sstream>

#include "vpi/error.hpp"
#include "vpi/json_io.hpp"

namespace vpi {

using nlohmann::json;

void to_json(json& j, const Point& p) { j = json::array({p.x, p.y}); }

void from_json(const json& j, Point& p) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorKind::kParseError, "position must be a [x, y] array");
  }
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

void to_json(json& j, const ObjectInstance& o) {
  j = json{{"id", o.id},       {"name", o.name},         {"color", o.color},
           {"shape", o.shape}, {"category", o.category}, {"position", o.position}};
}

void from_json(const json& j, ObjectInstance& o) {
  o.id = j.at("id").get<int>();
  o.name = j.at("name").get<std::string>();
  o.color = j.at("color").get<std::string>();
  o.shape = j.at("shape").get<std::string>();
  o.category = j.at("category").get<std::string>();
  o.position = j.at("position").get<Point>();
}

void to_json(json& j, const Scene& s) {
  j = json{{"task", task_name(s.task)}, {"objects", s.objects}};
}

void from_json(const json& j, Scene& s) {
  s.task = parse_task(j.at("task").get<std::string>());
  s.objects = j.at("objects").get<std::vector<ObjectInstance>>();
}

void to_json(json& j, const Move& m) {
  j = json{{"object_id", m.object_id}, {"target_position", m.target_position}};
}

void from_json(const json& j, Move& m) {
  m.object_id = j.at("object_id").get<int>();
  m.target_position = j.at("target_position").get<Point>();
}

void to_json(json& j, const ObjectDescriptor& d) {
  j = json{{"name", d.name}, {"color", d.color}, {"shape", d.shape}};
}

void from_json(const json& j, ObjectDescriptor& d) {
  d.name = j.at("name").get<std::string>();
  d.color = j.at("color").get<std::string>();
  d.shape = j.at("shape").get<std::string>();
}

void to_json(json& j, const VisualResidual& r) {
  if (r.unparsed) {
    j = json{{"unparsed", true}};
    return;
  }
  j = json{{"semantic", {{"source", r.semantic.source}, {"target", r.semantic.target}}},
           {"geometric", relation_token(r.geometric)},
           {"description", r.description}};
}

void from_json(const json& j, VisualResidual& r) {
  r = VisualResidual{};
  if (j.value("unparsed", false)) {
    r.unparsed = true;
    return;
  }
  r.semantic.source = j.at("semantic").at("source").get<ObjectDescriptor>();
  r.semantic.target = j.at("semantic").at("target").get<ObjectDescriptor>();
  r.geometric = parse_relation(j.at("geometric").get<std::string>());
  r.description = j.at("description").get<std::string>();
}

void to_json(json& j, const EpisodeRecord& e) {
  j = json{{"schema", kEpisodeSchema},
           {"task", task_name(e.task())},
           {"label", preference_token(e.label)},
           {"seed", e.seed},
           {"scenes", e.scenes},
           {"moves", e.moves},
           {"ground_truth_residuals", e.ground_truth_residuals}};
  if (e.image_paths) j["image_paths"] = *e.image_paths;
}

void from_json(const json& j, EpisodeRecord& e) {
  const auto schema = j.at("schema").get<std::string>();
  if (schema != kEpisodeSchema) {
    throw Error(ErrorKind::kParseError, "unsupported schema '" + schema + "'");
  }
  e.scenes = j.at("scenes").get<std::vector<Scene>>();
  e.moves = j.at("moves").get<std::vector<Move>>();
  e.ground_truth_residuals = j.at("ground_truth_residuals").get<std::vector<VisualResidual>>();
  e.label = parse_preference(j.at("label").get<std::string>());
  e.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("image_paths")) {
    e.image_paths = j.at("image_paths").get<std::vector<std::string>>();
  } else {
    e.image_paths.reset();
  }
}

std::vector<std::string> check_episode(const EpisodeRecord& episode) {
  std::vector<std::string> problems;
  const std::size_t n = episode.scenes.size();
  if (n < 2) problems.push_back("episode has fewer than 2 scenes");
  if (episode.moves.size() + 1 != n) problems.push_back("move count != scene count - 1");
  if (episode.ground_truth_residuals.size() + 1 != n) {
    problems.push_back("residual count != scene count - 1");
  }
  if (episode.image_paths && episode.image_paths->size() != n) {
    problems.push_back("image path count != scene count");
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& v : validate_scene(episode.scenes[k]).violations) {
      problems.push_back("scene " + std::to_string(k) + ": " + v);
    }
  }
  const std::size_t steps = std::min(episode.moves.size(), n == 0 ? 0 : n - 1);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::string tag = "step " + std::to_string(k) + ": ";
    try {
      if (apply_move(episode.scenes[k], episode.moves[k]) != episode.scenes[k + 1]) {
        problems.push_back(tag + "replayed scene differs");
      }
      if (k < episode.ground_truth_residuals.size() &&
          ground_truth_residual(episode.scenes[k], episode.scenes[k + 1]) !=
              episode.ground_truth_residuals[k]) {
        problems.push_back(tag + "residual differs from oracle");
      }
    } catch (const Error& err) {
      problems.push_back(tag + err.what());
    }
  }
  return problems;
}

std::string episode_to_json(const EpisodeRecord& episode, int indent) {
  return json(episode).dump(indent);
}

EpisodeRecord episode_from_json(const std::string& text) {
  try {
    return json::parse(text).get<EpisodeRecord>();
  } catch (const json::exception& err) {
    throw Error(ErrorKind::kParseError, err.what());
  }
}

EpisodeRecord load_episode(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return episode_from_json(buf.str());
}

void save_episode(const EpisodeRecord& episode, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path);
  out << episode_to_json(episode) << '\n';
}

}  // namespace vpi
