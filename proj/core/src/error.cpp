#include "graphimpute/error.hpp"

namespace graphimpute {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NoObservedFeatures: return "NoObservedFeatures";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::SingularDiffusion: return "SingularDiffusion";
    case ErrorKind::DivergentDiffusion: return "DivergentDiffusion";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::UnknownItem: return "UnknownItem";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(to_string(kind));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(kind, message, line)),
      kind_(kind),
      line_(line) {}

}  // namespace graphimpute
