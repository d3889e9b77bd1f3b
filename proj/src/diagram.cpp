#include "bhxy/diagram.hpp"

#include "bhxy/error.hpp"

#include <fstream>
#include <map>
#include <set>

namespace bhxy {
namespace {

std::string describe(const Node& n) {
  return "(" + std::to_string(n.q) + "," + std::to_string(n.z) + "," + std::to_string(n.t) + ")";
}

void check_node(const Node& n, int num_elements, const std::vector<UnitaryLabel>& labels, const NodeRule& rule,
                ErrorKind illegal_kind) {
  if (n.q < 1 || n.q > num_elements) {
    throw Error(ErrorKind::DanglingElementIndex, "node " + describe(n) + " refers to a missing element");
  }
  if (n.z != 0 && n.z != 1) throw Error(illegal_kind, "node " + describe(n) + " has z outside {0,1}");
  const UnitaryLabel label = labels[static_cast<std::size_t>(n.q - 1)];
  if (!rule.allows(label, n.t)) {
    throw Error(illegal_kind, "node " + describe(n) + " is not exposed by a '" + to_string(label) + "' element");
  }
}

void validate(const GateDiagram& d, const NodeRule& rule, ErrorKind illegal_kind) {
  if (d.num_elements < 1) throw Error(ErrorKind::DanglingElementIndex, "diagram needs at least one element");
  if (static_cast<int>(d.labels.size()) != d.num_elements) {
    throw Error(ErrorKind::DanglingElementIndex, "label count does not match R");
  }
  std::set<Node> used;
  for (const Node& n : d.self_loops) {
    check_node(n, d.num_elements, d.labels, rule, illegal_kind);
    if (!used.insert(n).second) throw Error(ErrorKind::NodeConflict, "node " + describe(n) + " has two self-loops");
  }
  for (const auto& [a, b] : d.edges) {
    check_node(a, d.num_elements, d.labels, rule, illegal_kind);
    check_node(b, d.num_elements, d.labels, rule, illegal_kind);
    if (a == b) throw Error(ErrorKind::NodeConflict, "edge joins node " + describe(a) + " to itself");
    for (const Node& n : {a, b}) {
      if (!used.insert(n).second) {
        throw Error(ErrorKind::NodeConflict, "node " + describe(n) + " already has a self-loop or an edge");
      }
    }
  }
}

Node node_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::ParseError, "node must be [q,z,t]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

}  // namespace

GateDiagram new_diagram(int num_elements, std::vector<UnitaryLabel> labels, std::vector<Node> self_loops,
                        std::vector<NodeEdge> edges, const NodeRule& rule) {
  GateDiagram d{num_elements, std::move(labels), std::move(self_loops), std::move(edges)};
  validate(d, rule, ErrorKind::IllegalNodeForLabel);
  return d;
}

GateDiagram empty_diagram(int num_elements, UnitaryLabel label, const NodeRule& rule) {
  return new_diagram(num_elements, std::vector<UnitaryLabel>(static_cast<std::size_t>(num_elements), label), {}, {},
                     rule);
}

GateDiagram diagram_from_json(const nlohmann::json& doc, const NodeRule& rule) {
  try {
    const int r = doc.at("R").get<int>();
    std::vector<UnitaryLabel> labels;
    for (const auto& l : doc.at("labels")) labels.push_back(parse_unitary_label(l.get<std::string>()));
    std::vector<Node> loops;
    for (const auto& n : doc.value("self_loops", nlohmann::json::array())) loops.push_back(node_from_json(n));
    std::vector<NodeEdge> edges;
    for (const auto& e : doc.value("edges", nlohmann::json::array())) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::ParseError, "edge must be [[q,z,t],[q,z,t]]");
      edges.emplace_back(node_from_json(e[0]), node_from_json(e[1]));
    }
    return new_diagram(r, std::move(labels), std::move(loops), std::move(edges), rule);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("diagram JSON: ") + e.what());
  }
}

nlohmann::json diagram_to_json(const GateDiagram& d) {
  nlohmann::json doc;
  doc["R"] = d.num_elements;
  doc["labels"] = nlohmann::json::array();
  for (UnitaryLabel l : d.labels) doc["labels"].push_back(to_string(l));
  doc["self_loops"] = nlohmann::json::array();
  for (const Node& n : d.self_loops) doc["self_loops"].push_back({n.q, n.z, n.t});
  doc["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : d.edges) {
    doc["edges"].push_back({nlohmann::json{a.q, a.z, a.t}, nlohmann::json{b.q, b.z, b.t}});
  }
  return doc;
}

GateDiagram read_diagram_file(const std::filesystem::path& path, const NodeRule& rule) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return diagram_from_json(doc, rule);
}

Eigen::Index compiled_index(const ElementGeometry& g, int q, int z, int t, int j) {
  return static_cast<Eigen::Index>(q - 1) * g.num_vertices() + g.index(z, t, j);
}

Graph compile(const GateDiagram& d, const ElementGraph& element) {
  try {
    validate(d, element.node_rule, ErrorKind::ElementGeometryMismatch);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ElementGeometryMismatch) throw;
    throw Error(ErrorKind::ElementGeometryMismatch, e.what());
  }
  const ElementGeometry& geo = element.geometry;
  const Eigen::Index block = geo.num_vertices();
  const Eigen::Index total = block * d.num_elements;

  std::vector<Triplet> triplets;
  const SparseMatrix& a = element.graph.adjacency();
  for (int q = 0; q < d.num_elements; ++q) {
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
        triplets.emplace_back(q * block + r, q * block + it.col(), 1.0);
      }
    }
  }
  for (const Node& n : d.self_loops) {
    for (int j = 0; j < geo.j_max; ++j) {
      const Eigen::Index v = compiled_index(geo, n.q, n.z, n.t, j);
      triplets.emplace_back(v, v, 1.0);
    }
  }
  for (const auto& [x, y] : d.edges) {
    for (int j = 0; j < geo.j_max; ++j) {
      const Eigen::Index u = compiled_index(geo, x.q, x.z, x.t, j);
      const Eigen::Index v = compiled_index(geo, y.q, y.z, y.t, j);
      triplets.emplace_back(u, u, 1.0);
      triplets.emplace_back(v, v, 1.0);
      triplets.emplace_back(u, v, 1.0);
      triplets.emplace_back(v, u, 1.0);
    }
  }
  SparseMatrix adjacency(total, total);
  adjacency.setFromTriplets(triplets.begin(), triplets.end());
  for (Eigen::Index r = 0; r < adjacency.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adjacency, r); it; ++it) {
      if (it.value() != 1.0) {
        throw Error(ErrorKind::InternalInvariant, "compiled entry (" + std::to_string(r) + "," +
                                                      std::to_string(it.col()) + ") = " +
                                                      std::to_string(it.value()));
      }
    }
  }

  std::vector<VertexLabel> labels;
  labels.reserve(static_cast<std::size_t>(total));
  for (int q = 1; q <= d.num_elements; ++q)
    for (int z = 0; z < 2; ++z)
      for (int t = 1; t <= geo.t_max; ++t)
        for (int j = 0; j < geo.j_max; ++j) labels.push_back({q, z, t, j});
  return Graph(std::move(adjacency), std::move(labels), "q,z,t,j");
}

GateGraphCheck check_gate_graph(const GateDiagram& d, const ElementGraph& element, double tol) {
  const Graph g = compile(d, element);
  GateGraphCheck check;
  check.mu = mu(g, std::min(tol, default_eigen_tolerance(g)));
  check.element_energy = element.ground_energy;
  check.is_e1_gate_graph = std::abs(check.mu - element.ground_energy) <= tol;
  return check;
}

bool is_e1_gate_graph(const GateDiagram& d, const ElementGraph& element, double tol) {
  return check_gate_graph(d, element, tol).is_e1_gate_graph;
}

Eigen::MatrixXcd y_space_basis(const GateDiagram& d, const ElementGraph& element) {
  const Eigen::Index block = element.geometry.num_vertices();
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(block * d.num_elements, 4 * d.num_elements);
  for (int q = 0; q < d.num_elements; ++q) {
    y.block(q * block, 4 * q, block, 4) = element.ground_basis;
  }
  return y;
}

Eigen::MatrixXd diagram_penalty(const GateDiagram& d, const ElementGraph& element) {
  const ElementGeometry& geo = element.geometry;
  const Eigen::Index total = geo.num_vertices() * d.num_elements;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(total, total);
  for (const Node& n : d.self_loops) {
    for (int j = 0; j < geo.j_max; ++j) {
      const Eigen::Index v = compiled_index(geo, n.q, n.z, n.t, j);
      h(v, v) += 1.0;
    }
  }
  for (const auto& [x, y] : d.edges) {
    for (int j = 0; j < geo.j_max; ++j) {
      const Eigen::Index u = compiled_index(geo, x.q, x.z, x.t, j);
      const Eigen::Index v = compiled_index(geo, y.q, y.z, y.t, j);
      h(u, u) += 1.0;
      h(v, v) += 1.0;
      h(u, v) += 1.0;
      h(v, u) += 1.0;
    }
  }
  return h;
}

}  // namespace bhxy
