#pragma once

#include <stdexcept>
#include <string>

namespace sameval {

/// Every failure the library can signal, named after its contract.
enum class ErrorKind {
  // pairing / shapes
  DimensionMismatch,
  RangeMismatch,
  ImageTooSmall,
  ShapeMismatch,
  // aggregation
  EmptyDataset,
  InfiniteResult,
  // distribution metrics
  TooFewSamples,
  NotSymmetric,
  ConvergenceFailure,
  NumericalInstability,
  ExtractorMismatch,
  TooFewGroups,
  // SAMe
  DegenerateColumn,
  TooFewValues,
  MissingValues,
  // extractor
  ModelLoadError,
  InferenceError,
  PreprocessMismatch,
  // file IO
  IoError,
  FormatError,
  // dataset
  MissingDomainDir,
  NoPairsFound,
  DecodeError,
  UnsupportedFormat,
  InconsistentDimensions,
  NonContiguousIndices,
  // generic
  EmptyInput,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace sameval
