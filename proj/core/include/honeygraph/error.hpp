#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace honeygraph {

enum class ErrorKind {
  MalformedInput,
  EmptyGraph,
  InvalidGraph,
  CycleDetected,
  Capacity,
  ShapeMismatch,
  Infeasible,
  InsufficientSamples,
  InvalidArgument,
  Divergence,
  Domain,
  EmptyInput,
  NoUsers,
  Unreachable,
  CorpusExhausted,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace honeygraph
