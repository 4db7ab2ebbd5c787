#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vpi/backend.hpp"
#include "vpi/benchmark.hpp"
#include "vpi/covr.hpp"
#include "vpi/episode.hpp"
#include "vpi/scene.hpp"

namespace vpi {

struct SessionOptions {
  Task task = Task::kBlock;
  Method method = Method::kMdpe;
  BackendSpec backend;
  /// Seed of the initial scene.
  std::uint64_t seed = 0;
  /// Label an oracle backend answers with; when absent the oracle uses the
  /// MDPE ranking of the current scene.
  std::optional<PreferenceLabel> oracle_label;
};

struct SessionState {
  std::string id;
  SessionOptions options;
  std::vector<Scene> scenes;
  std::vector<Move> moves;
  std::optional<InferenceResult> last_inference;
  std::uint64_t revision = 0;
};

nlohmann::json session_to_json(const SessionState& state);

/// The session history as an episode, with ground-truth residuals and the
/// label an oracle backend should report.
EpisodeRecord session_episode(const SessionState& state);

/// In-memory sessions. Writes to one session are serialized; reads take a
/// consistent snapshot; at most one inference runs per session at a time.
class SessionManager {
 public:
  SessionManager() = default;
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  SessionState create(const SessionOptions& options);
  /// Throws kUnknownSession.
  SessionState get(const std::string& id) const;
  /// apply_move on the head scene; throws kUnknownSession, kUnknownObject or
  /// kInvalidResult and leaves the session unchanged on failure.
  SessionState apply(const std::string& id, const Move& move);
  /// Runs the session's method over its history and stores the result.
  /// Throws kBusy when another inference for the session is in flight.
  InferenceResult infer(const std::string& id);
  /// Blocks until the revision exceeds `since`, the timeout elapses or the
  /// manager shuts down; returns the state only in the first case.
  std::optional<SessionState> wait_for_change(const std::string& id, std::uint64_t since,
                                              std::chrono::milliseconds timeout) const;
  /// PNG of scene `step`; throws kUnknownSession or kInvalidArgument.
  Png render(const std::string& id, std::size_t step) const;

  std::vector<std::string> ids() const;
  nlohmann::json snapshot() const;
  /// Wakes every long-poll waiter; later waits return immediately.
  void shutdown();

 private:
  struct Slot {
    mutable std::mutex mu;
    mutable std::condition_variable cv;
    SessionState state;
    bool inferring = false;
  };

  std::shared_ptr<Slot> find(const std::string& id) const;

  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t counter_ = 0;
  std::atomic<bool> stopping_{false};
};

}  // namespace vpi
