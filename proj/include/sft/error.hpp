#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sft {

enum class ErrorCode {
  kDuplicateEdge,
  kSelfLoop,
  kWeightOutOfRange,
  kNodeOutOfRange,
  kInvalidRange,
  kParseError,
  kWindowUnreachable,
  kDisconnectedInfection,
  kPowerIterationDiverged,
  kEmptyRecords,
  kNotATree,
  kTooLarge,
  kInvalidRegime,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. Parse failures carry the 1-based line
// of the offending input when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace sft
