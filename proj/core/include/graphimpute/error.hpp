#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphimpute {

enum class ErrorKind {
  EmptyDataset,
  InvalidParameter,
  NoObservedFeatures,
  GraphTooLarge,
  SingularDiffusion,
  DivergentDiffusion,
  ParseError,
  FormatError,
  UnknownItem,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }

  // 1-based source line for parse-style errors.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace graphimpute
