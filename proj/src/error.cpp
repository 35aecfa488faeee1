#include "sft/error.hpp"

namespace sft {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kWeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kWindowUnreachable: return "WindowUnreachable";
    case ErrorCode::kDisconnectedInfection: return "DisconnectedInfection";
    case ErrorCode::kPowerIterationDiverged: return "PowerIterationDiverged";
    case ErrorCode::kEmptyRecords: return "EmptyRecords";
    case ErrorCode::kNotATree: return "NotATree";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidRegime: return "InvalidRegime";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace sft
