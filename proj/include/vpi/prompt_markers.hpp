#pragma once

// Fixed phrases that identify which kind of request a prompt is. Builders
// emit them verbatim; the oracle backend keys on them.

namespace vpi::markers {

inline constexpr const char* kResidualQuestion = "How did the objects move between the ";
inline constexpr const char* kPreferenceSet = "Preference set:";
inline constexpr const char* kPositionRequest = "normalized 2D position";

}  // namespace vpi::markers
