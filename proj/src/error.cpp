#include "vpi/error.hpp"

namespace vpi {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kUnknownObject: return "UnknownObject";
    case ErrorKind::kInvalidResult: return "InvalidResult";
    case ErrorKind::kUnknownPreference: return "UnknownPreference";
    case ErrorKind::kUnknownRelation: return "UnknownRelation";
    case ErrorKind::kGenerationFailure: return "GenerationFailure";
    case ErrorKind::kPlanningFailure: return "PlanningFailure";
    case ErrorKind::kNoMove: return "NoMove";
    case ErrorKind::kMultipleMoves: return "MultipleMoves";
    case ErrorKind::kCoincidentPositions: return "CoincidentPositions";
    case ErrorKind::kMalformedResponse: return "MalformedResponse";
    case ErrorKind::kBackendFailure: return "BackendFailure";
    case ErrorKind::kUnrecognizedRequest: return "UnrecognizedRequest";
    case ErrorKind::kEmptyScene: return "EmptyScene";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kUnknownSession: return "UnknownSession";
    case ErrorKind::kBusy: return "Busy";
  }
  return "Unknown";
}

}  // namespace vpi
