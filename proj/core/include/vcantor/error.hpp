#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vcantor {

enum class ErrorKind {
  EmptyCatalog,
  InvalidCatalog,
  TreeTooLarge,
  DepthExhausted,
  IndexError,
  ArgumentError,
  SingularMass,
  InvalidInput,
  NeckTimeout,
  NoisyRoot,
  InsufficientData,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Base class of every failure raised by the library. The kind mirrors the
/// error names used in reports and on the command line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A construction needed more tree generations than were materialized.
class DepthExhausted : public Error {
 public:
  DepthExhausted(const std::string& what, std::size_t additional_depth);

  /// Lower bound on the number of extra generations that would have been needed.
  [[nodiscard]] std::size_t additional_depth() const noexcept { return additional_depth_; }

 private:
  std::size_t additional_depth_;
};

/// Monte Carlo noise prevented a confident sign decision while bracketing.
class NoisyRoot : public Error {
 public:
  NoisyRoot(const std::string& what, double lower, double upper);

  [[nodiscard]] double lower() const noexcept { return lower_; }
  [[nodiscard]] double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace vcantor
