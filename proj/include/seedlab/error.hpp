#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seedlab {

/// Failure categories surfaced by the library. The CLI maps these onto exit
/// codes; tests assert on the category rather than on message text.
enum class ErrorKind {
  InvalidArgument,
  DegenerateHistogram,
  DegenerateRegion,
  EmptyRegion,
  NoValidPairs,
  SingleClassDataset,
  DimensionMismatch,
  UndefinedAuc,
  LengthMismatch,
  EmptyMatrix,
  UnsupportedFormat,
  CorruptFile,
  MalformedArff,
  MissingClassAttribute,
  VersionUnsupported,
  DigestMismatch,
  FeatureSchemaMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace seedlab
