#include "bhxy/error.hpp"

namespace bhxy {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NonBinaryEntry: return "NonBinaryEntry";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::MissingSelfLoop: return "MissingSelfLoop";
    case ErrorKind::BadLabeling: return "BadLabeling";
    case ErrorKind::WrongVertexCount: return "WrongVertexCount";
    case ErrorKind::GeometryMismatch: return "GeometryMismatch";
    case ErrorKind::NodeConflict: return "NodeConflict";
    case ErrorKind::IllegalNodeForLabel: return "IllegalNodeForLabel";
    case ErrorKind::DanglingElementIndex: return "DanglingElementIndex";
    case ErrorKind::ElementGeometryMismatch: return "ElementGeometryMismatch";
    case ErrorKind::BadWeight: return "BadWeight";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::AlphaMismatch: return "AlphaMismatch";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::EmptyNullspace: return "EmptyNullspace";
    case ErrorKind::NotE1GateGraph: return "NotE1GateGraph";
    case ErrorKind::SolverNoConvergence: return "SolverNoConvergence";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

}  // namespace bhxy
