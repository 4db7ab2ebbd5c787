#include "vpi/session.hpp"

#include <cstdio>

#include "vpi/baselines.hpp"
#include "vpi/error.hpp"
#include "vpi/json_io.hpp"
#include "vpi/render.hpp"
#include "vpi/residual.hpp"
#include "vpi/rng.hpp"
#include "vpi/scenegen.hpp"

namespace vpi {

nlohmann::json session_to_json(const SessionState& state) {
  nlohmann::json j;
  j["id"] = state.id;
  j["task"] = task_name(state.options.task);
  j["method"] = method_token(state.options.method);
  j["backend"] = state.options.backend.to_string();
  j["seed"] = state.options.seed;
  j["oracle_label"] = state.options.oracle_label
                          ? nlohmann::json(preference_token(*state.options.oracle_label))
                          : nlohmann::json(nullptr);
  j["revision"] = state.revision;
  j["scenes"] = state.scenes;
  j["moves"] = state.moves;
  j["scene"] = state.scenes.back();
  j["last_inference"] =
      state.last_inference ? inference_to_json(*state.last_inference) : nlohmann::json(nullptr);
  return j;
}

EpisodeRecord session_episode(const SessionState& state) {
  EpisodeRecord ep;
  ep.scenes = state.scenes;
  ep.moves = state.moves;
  ep.seed = state.options.seed;
  for (std::size_t k = 0; k + 1 < state.scenes.size(); ++k) {
    ep.ground_truth_residuals.push_back(ground_truth_residual(state.scenes[k], state.scenes[k + 1]));
  }
  if (state.options.oracle_label) {
    ep.label = *state.options.oracle_label;
  } else {
    ep.label = mdpe_infer(mdpe_features(state.scenes.back())).ranked.front().first;
  }
  return ep;
}

SessionManager::~SessionManager() { shutdown(); }

std::shared_ptr<SessionManager::Slot> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::kUnknownSession, "no session '" + id + "'");
  return it->second;
}

SessionState SessionManager::create(const SessionOptions& options) {
  auto slot = std::make_shared<Slot>();
  slot->state.options = options;
  slot->state.scenes.push_back(sample_scene(options.task, options.seed));
  slot->state.revision = 1;

  std::unique_lock lock(map_mu_);
  const std::uint64_t n = ++counter_;
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%016llx",
                static_cast<unsigned long long>(derive_seed(n, {tag_of("session"), options.seed})));
  slot->state.id = buf;
  sessions_.emplace(slot->state.id, slot);
  return slot->state;
}

SessionState SessionManager::get(const std::string& id) const {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  return slot->state;
}

SessionState SessionManager::apply(const std::string& id, const Move& move) {
  auto slot = find(id);
  std::lock_guard lock(slot->mu);
  Scene next = apply_move(slot->state.scenes.back(), move);
  slot->state.scenes.push_back(std::move(next));
  slot->state.moves.push_back(move);
  ++slot->state.revision;
  slot->cv.notify_all();
  return slot->state;
}

InferenceResult SessionManager::infer(const std::string& id) {
  auto slot = find(id);
  SessionState snapshot;
  {
    std::lock_guard lock(slot->mu);
    if (slot->inferring) {
      throw Error(ErrorKind::kBusy, "an inference is already running for session " + id);
    }
    slot->inferring = true;
    snapshot = slot->state;
  }

  InferenceResult result;
  try {
    const EpisodeRecord episode = session_episode(snapshot);
    const Method method = snapshot.options.method;
    std::vector<Png> images;
    std::shared_ptr<MllmBackend> backend;
    CovrOptions options;
    if (method != Method::kMdpe) {
      images = render_episode(episode);
      backend = make_backend(snapshot.options.backend, episode);
      options = CovrOptions::for_task(snapshot.options.task);
    }
    result = run_method(method, episode, images, backend.get(), options);
  } catch (...) {
    std::lock_guard lock(slot->mu);
    slot->inferring = false;
    throw;
  }

  std::lock_guard lock(slot->mu);
  slot->inferring = false;
  slot->state.last_inference = result;
  ++slot->state.revision;
  slot->cv.notify_all();
  return result;
}

std::optional<SessionState> SessionManager::wait_for_change(
    const std::string& id, std::uint64_t since, std::chrono::milliseconds timeout) const {
  auto slot = find(id);
  std::unique_lock lock(slot->mu);
  const bool changed = slot->cv.wait_for(lock, timeout, [&] {
    return slot->state.revision > since || stopping_.load();
  });
  if (changed && slot->state.revision > since) return slot->state;
  return std::nullopt;
}

Png SessionManager::render(const std::string& id, std::size_t step) const {
  Scene scene;
  {
    auto slot = find(id);
    std::lock_guard lock(slot->mu);
    if (step >= slot->state.scenes.size()) {
      throw Error(ErrorKind::kInvalidArgument, "no step " + std::to_string(step));
    }
    scene = slot->state.scenes[step];
  }
  return encode_png(render_scene(scene));
}

std::vector<std::string> SessionManager::ids() const {
  std::shared_lock lock(map_mu_);
  std::vector<std::string> out;
  for (const auto& [id, slot] : sessions_) out.push_back(id);
  return out;
}

nlohmann::json SessionManager::snapshot() const {
  auto out = nlohmann::json::array();
  for (const auto& id : ids()) out.push_back(session_to_json(get(id)));
  return out;
}

void SessionManager::shutdown() {
  stopping_ = true;
  std::shared_lock lock(map_mu_);
  for (const auto& [id, slot] : sessions_) {
    std::lock_guard slot_lock(slot->mu);
    slot->cv.notify_all();
  }
}

}  // namespace vpi
