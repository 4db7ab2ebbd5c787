#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vpi {

/// Failure categories raised by the library. Each maps to one named error
/// condition of a public operation; callers branch on kind() rather than on
/// message text.
enum class ErrorKind {
  kInvalidArgument,
  kUnknownObject,
  kInvalidResult,
  kUnknownPreference,
  kUnknownRelation,
  kGenerationFailure,
  kPlanningFailure,
  kNoMove,
  kMultipleMoves,
  kCoincidentPositions,
  kMalformedResponse,
  kBackendFailure,
  kUnrecognizedRequest,
  kEmptyScene,
  kLengthMismatch,
  kEmptyInput,
  kParseError,
  kIoError,
  kUnknownSession,
  kBusy,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vpi
