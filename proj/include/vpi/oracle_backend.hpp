#pragma once

#include <cstdint>
#include <string>

#include "vpi/backend.hpp"
#include "vpi/episode.hpp"

namespace vpi {

/// Per-element corruption flags for one oracle residual.
struct CorruptionMask {
  bool semantic = false;
  bool geometric = false;
  bool description = false;
};

/// The residual the oracle reports for pair `pair_index`: ground truth with
/// each element independently corrupted with probability `noise`. The
/// uniform draw deciding each element does not depend on `noise`, so raising
/// it only ever adds corruptions.
VisualResidual oracle_residual(const EpisodeRecord& episode, std::size_t pair_index, double noise,
                               std::uint64_t seed, CorruptionMask* mask = nullptr);

/// The label the oracle answers preference requests with.
PreferenceLabel oracle_preference(const EpisodeRecord& episode, double noise, std::uint64_t seed);

/// Answers a request built by this library's prompt builders:
///   residual request   -> canonical residual text for the named image pair
///   preference request -> "Preference: <sentence>"
///   position request   -> "name: (x, y)" per object, jittered by noise * 0.25
/// Throws kUnrecognizedRequest for anything else.
BackendResponse oracle_complete(const BackendRequest& request, const EpisodeRecord& episode,
                                double noise, std::uint64_t seed);

/// Ground-truth test double for a vision-language model.
class OracleBackend : public MllmBackend {
 public:
  OracleBackend(EpisodeRecord episode, double noise, std::uint64_t seed);

  BackendResponse complete(const BackendRequest& request) override;
  std::string id() const override;
  int max_concurrency() const override { return 4; }

  const EpisodeRecord& episode() const { return episode_; }

 private:
  EpisodeRecord episode_;
  double noise_;
  std::uint64_t seed_;
};

}  // namespace vpi
