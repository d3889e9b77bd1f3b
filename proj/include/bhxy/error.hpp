#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bhxy {

enum class ErrorKind {
  // input validation
  NotSymmetric,
  NonBinaryEntry,
  EmptyGraph,
  MissingSelfLoop,
  BadLabeling,
  WrongVertexCount,
  GeometryMismatch,
  NodeConflict,
  IllegalNodeForLabel,
  DanglingElementIndex,
  ElementGeometryMismatch,
  BadWeight,
  DimensionMismatch,
  NotOrthonormal,
  NonPositiveInput,
  AlphaMismatch,
  InvalidInstance,
  ParseError,
  IoError,
  // numerical / resource
  NotPSD,
  EmptyNullspace,
  NotE1GateGraph,
  SolverNoConvergence,
  BudgetExceeded,
  InternalInvariant,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every library failure is reported through this type; `kind()` is stable
/// and is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bhxy
