#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stumpscope {

// Machine-readable error codes. The HTTP layer reports these verbatim.
enum class ErrorCode {
  // dataset
  MissingColumn,
  NonNumericCell,
  MoreThanTwoClasses,
  SingleClass,
  UnknownPositiveLabel,
  EmptyDataset,
  NonFiniteInput,
  ClassTooSmall,
  InvalidRatio,
  // target
  DegenerateTraining,
  DimensionMismatch,
  MissingIndex,
  InvalidLabel,
  DuplicateIndex,
  // sweep
  RangeTooSmall,
  // editing / projection / explain
  IndexOutOfRange,
  StumpIndexOutOfRange,
  ThresholdOutOfDomain,
  NothingToUndo,
  InvalidPrecision,
  InvalidDocument,
  // io / service
  IoError,
  NotFound,
  InvalidRequest,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stumpscope
