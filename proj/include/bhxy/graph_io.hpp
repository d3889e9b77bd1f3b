#pragma once

#include "bhxy/graph.hpp"

#include <filesystem>
#include <iosfwd>

namespace bhxy {

/// Version of the vertex-label scheme recorded in Matrix Market headers and
/// label sidecars.
inline constexpr int kLabelSchemeVersion = 1;

/// Reads a Matrix Market coordinate file (pattern, integer or real;
/// symmetric or general). Every stored value must be 1. Throws ParseError.
Graph read_matrix_market(std::istream& in);

/// Writes `g` as "coordinate pattern symmetric" (lower triangle, 1-based),
/// with a header comment naming the label scheme.
void write_matrix_market(std::ostream& out, const Graph& g);

/// Writes a real symmetric operator (lower triangle, %.17g values).
void write_symmetric_operator(std::ostream& out, const SparseMatrix& op, const std::string& comment = {});

/// "<stem>.labels.json" next to an .mtx path.
std::filesystem::path label_sidecar_path(const std::filesystem::path& mtx_path);

/// Reads an .mtx file and, when present, its label sidecar.
Graph read_graph_file(const std::filesystem::path& path);

/// Writes an .mtx file plus a label sidecar when the graph carries labels.
/// Returns every path written.
std::vector<std::filesystem::path> write_graph_file(const std::filesystem::path& path, const Graph& g);

struct LabelSidecar {
  std::string scheme;
  int version = kLabelSchemeVersion;
  std::vector<VertexLabel> labels;
};

LabelSidecar read_label_sidecar(const std::filesystem::path& path);
void write_label_sidecar(const std::filesystem::path& path, const LabelSidecar& sidecar);

}  // namespace bhxy
