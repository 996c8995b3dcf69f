#include "vcantor/error.hpp"

namespace vcantor {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCatalog: return "EmptyCatalog";
    case ErrorKind::InvalidCatalog: return "InvalidCatalog";
    case ErrorKind::TreeTooLarge: return "TreeTooLarge";
    case ErrorKind::DepthExhausted: return "DepthExhausted";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::ArgumentError: return "ArgumentError";
    case ErrorKind::SingularMass: return "SingularMass";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NeckTimeout: return "NeckTimeout";
    case ErrorKind::NoisyRoot: return "NoisyRoot";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

DepthExhausted::DepthExhausted(const std::string& what, std::size_t additional_depth)
    : Error(ErrorKind::DepthExhausted, what + " (need at least " + std::to_string(additional_depth) +
                                           " more generation(s))"),
      additional_depth_(additional_depth) {}

NoisyRoot::NoisyRoot(const std::string& what, double lower, double upper)
    : Error(ErrorKind::NoisyRoot, what), lower_(lower), upper_(upper) {}

}  // namespace vcantor
