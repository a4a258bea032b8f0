#include "sameval/error.hpp"

namespace sameval {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RangeMismatch: return "RangeMismatch";
    case ErrorKind::ImageTooSmall: return "ImageTooSmall";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::InfiniteResult: return "InfiniteResult";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::ExtractorMismatch: return "ExtractorMismatch";
    case ErrorKind::TooFewGroups: return "TooFewGroups";
    case ErrorKind::DegenerateColumn: return "DegenerateColumn";
    case ErrorKind::TooFewValues: return "TooFewValues";
    case ErrorKind::MissingValues: return "MissingValues";
    case ErrorKind::ModelLoadError: return "ModelLoadError";
    case ErrorKind::InferenceError: return "InferenceError";
    case ErrorKind::PreprocessMismatch: return "PreprocessMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::MissingDomainDir: return "MissingDomainDir";
    case ErrorKind::NoPairsFound: return "NoPairsFound";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::InconsistentDimensions: return "InconsistentDimensions";
    case ErrorKind::NonContiguousIndices: return "NonContiguousIndices";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace sameval
