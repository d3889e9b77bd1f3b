#pragma once

#include "bhxy/element.hpp"
#include "bhxy/graph.hpp"

#include <json.hpp>

#include <compare>
#include <filesystem>
#include <utility>
#include <vector>

namespace bhxy {

/// Node (q, z, t) of a gate diagram; q is 1-based, t is 1-based.
struct Node {
  int q = 1;
  int z = 0;
  int t = 1;
  auto operator<=>(const Node&) const = default;
};

using NodeEdge = std::pair<Node, Node>;

struct GateDiagram {
  int num_elements = 0;
  std::vector<UnitaryLabel> labels;
  std::vector<Node> self_loops;
  std::vector<NodeEdge> edges;
};

/// Validates the diagram against a node rule (default: the gate elements).
/// Throws DanglingElementIndex, IllegalNodeForLabel or NodeConflict.
GateDiagram new_diagram(int num_elements, std::vector<UnitaryLabel> labels, std::vector<Node> self_loops,
                        std::vector<NodeEdge> edges, const NodeRule& rule = NodeRule::gate_element());

/// Empty diagram of R identical elements.
GateDiagram empty_diagram(int num_elements, UnitaryLabel label = UnitaryLabel::Identity,
                          const NodeRule& rule = NodeRule::gate_element());

/// {"R", "labels", "self_loops": [[q,z,t],...], "edges": [[[q,z,t],[q,z,t]],...]}
GateDiagram diagram_from_json(const nlohmann::json& doc, const NodeRule& rule = NodeRule::gate_element());
nlohmann::json diagram_to_json(const GateDiagram& d);
GateDiagram read_diagram_file(const std::filesystem::path& path, const NodeRule& rule = NodeRule::gate_element());

/// Vertex index of (q, z, t, j) in a compiled gate graph.
Eigen::Index compiled_index(const ElementGeometry& g, int q, int z, int t, int j);

/// 1_q (x) A(element) + h_S + h_E, labelled (q,z,t,j). Throws
/// ElementGeometryMismatch when the diagram does not fit the element, and
/// InternalInvariant if an entry would exceed 1.
Graph compile(const GateDiagram& d, const ElementGraph& element);

struct GateGraphCheck {
  double mu = 0.0;
  double element_energy = 0.0;
  bool is_e1_gate_graph = false;
};

GateGraphCheck check_gate_graph(const GateDiagram& d, const ElementGraph& element, double tol = 1e-9);
/// mu(compile(d)) equals the element ground energy within tol.
bool is_e1_gate_graph(const GateDiagram& d, const ElementGraph& element, double tol = 1e-9);

/// |q>|psi_{z,a}>, column 4(q-1) + 2z + a.
Eigen::MatrixXcd y_space_basis(const GateDiagram& d, const ElementGraph& element);

/// h_S + h_E as a dense matrix in the compiled vertex order.
Eigen::MatrixXd diagram_penalty(const GateDiagram& d, const ElementGraph& element);

}  // namespace bhxy
