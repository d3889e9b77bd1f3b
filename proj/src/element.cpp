#include "bhxy/element.hpp"

#include "bhxy/error.hpp"
#include "bhxy/graph_io.hpp"
#include "bhxy/spectral.hpp"

#include <cstdlib>
#include <numbers>
#include <set>

#ifndef BHXY_DEFAULT_ASSET_DIR
#define BHXY_DEFAULT_ASSET_DIR "data/assets"
#endif

namespace bhxy {

using cd = std::complex<double>;

std::string to_string(UnitaryLabel label) {
  switch (label) {
    case UnitaryLabel::Identity: return "1";
    case UnitaryLabel::Hadamard: return "H";
    case UnitaryLabel::HadamardT: return "HT";
  }
  return "?";
}

UnitaryLabel parse_unitary_label(const std::string& text) {
  if (text == "1") return UnitaryLabel::Identity;
  if (text == "H") return UnitaryLabel::Hadamard;
  if (text == "HT") return UnitaryLabel::HadamardT;
  throw Error(ErrorKind::ParseError, "unknown unitary label '" + text + "'");
}

std::string to_string(ElementSource source) { return source == ElementSource::Asset ? "asset" : "mini_double"; }

NodeRule NodeRule::gate_element() {
  NodeRule rule;
  rule.t_max_ = 8;
  rule.allowed_[static_cast<std::size_t>(UnitaryLabel::Identity)] = {1, 3, 5, 7};
  rule.allowed_[static_cast<std::size_t>(UnitaryLabel::Hadamard)] = {1, 3, 2, 8};
  rule.allowed_[static_cast<std::size_t>(UnitaryLabel::HadamardT)] = {1, 3, 4, 6};
  return rule;
}

NodeRule NodeRule::all_times(int t_max) {
  NodeRule rule;
  rule.t_max_ = t_max;
  std::vector<int> all;
  for (int t = 1; t <= t_max; ++t) all.push_back(t);
  rule.allowed_.fill(all);
  return rule;
}

bool NodeRule::allows(UnitaryLabel label, int t) const {
  const auto& ts = times(label);
  return std::find(ts.begin(), ts.end(), t) != ts.end();
}

namespace {

Eigen::Matrix2cd gate_for_time(int t) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd h;
  h << s, s, s, -s;
  Eigen::Matrix2cd phase = Eigen::Matrix2cd::Identity();
  phase(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
  switch (t) {
    case 2:
    case 8: return h;
    case 4:
    case 6: return h * phase;
    default: return Eigen::Matrix2cd::Identity();
  }
}

}  // namespace

Eigen::VectorXcd psi_state(int z, int a, const ElementGeometry& geometry) {
  if (!(geometry == kGateElementGeometry)) {
    throw Error(ErrorKind::GeometryMismatch, "psi_state is defined on the 8 x 8 gate-element geometry");
  }
  if ((z != 0 && z != 1) || (a != 0 && a != 1)) throw Error(ErrorKind::GeometryMismatch, "z and a must be bits");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(geometry.num_vertices());
  const double norm = 1.0 / std::sqrt(8.0);
  for (int t = 1; t <= 8; ++t) {
    const Eigen::Vector2cd first = gate_for_time(t).col(z);
    for (int zz = 0; zz < 2; ++zz) {
      for (int j = 0; j < 8; ++j) {
        const cd omega = std::polar(norm, -std::numbers::pi * j / 4.0);
        psi[geometry.index(zz, t, j)] = norm * first[zz] * omega;
      }
    }
  }
  if (a == 1) psi = psi.conjugate().eval();
  return psi;
}

ElementGraph load_element(const Graph& labelled) {
  const ElementGeometry geometry = kGateElementGeometry;
  if (labelled.num_vertices() != geometry.num_vertices()) {
    throw Error(ErrorKind::WrongVertexCount, "expected " + std::to_string(geometry.num_vertices()) +
                                                 " vertices, got " + std::to_string(labelled.num_vertices()));
  }
  if (labelled.labels().size() != static_cast<std::size_t>(labelled.num_vertices())) {
    throw Error(ErrorKind::BadLabeling, "element asset carries no (z,t,j) labels");
  }
  std::vector<Eigen::Index> position(labelled.labels().size());
  std::set<Eigen::Index> seen;
  for (std::size_t v = 0; v < labelled.labels().size(); ++v) {
    const VertexLabel& l = labelled.labels()[v];
    if (l.size() != 3 || !geometry.contains(l[0], l[1], l[2])) {
      throw Error(ErrorKind::BadLabeling, "vertex " + std::to_string(v) + " has an invalid (z,t,j) label");
    }
    position[v] = geometry.index(l[0], l[1], l[2]);
    if (!seen.insert(position[v]).second) {
      throw Error(ErrorKind::BadLabeling, "duplicate label (" + std::to_string(l[0]) + "," + std::to_string(l[1]) +
                                              "," + std::to_string(l[2]) + ")");
    }
  }

  std::vector<Triplet> triplets;
  const SparseMatrix& a = labelled.adjacency();
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      triplets.emplace_back(position[static_cast<std::size_t>(r)], position[static_cast<std::size_t>(it.col())], 1.0);
    }
  }
  SparseMatrix canonical(a.rows(), a.cols());
  canonical.setFromTriplets(triplets.begin(), triplets.end());

  std::vector<VertexLabel> labels;
  for (int z = 0; z < 2; ++z)
    for (int t = 1; t <= geometry.t_max; ++t)
      for (int j = 0; j < geometry.j_max; ++j) labels.push_back({z, t, j});

  ElementGraph e{Graph(std::move(canonical), std::move(labels), "z,t,j"), geometry};
  e.ground_energy = kE1;
  e.ground_basis.resize(geometry.num_vertices(), 4);
  for (int z = 0; z < 2; ++z)
    for (int alpha = 0; alpha < 2; ++alpha) e.ground_basis.col(2 * z + alpha) = psi_state(z, alpha, geometry);
  e.source = ElementSource::Asset;
  e.node_rule = NodeRule::gate_element();
  e.block_constant = 1.0 / 8.0;
  return e;
}

ElementGraph load_element(const std::filesystem::path& mtx_path) {
  const Graph g = read_graph_file(mtx_path);
  if (g.labels().empty()) {
    if (g.num_vertices() != kGateElementGeometry.num_vertices()) {
      throw Error(ErrorKind::WrongVertexCount, "expected 128 vertices, got " + std::to_string(g.num_vertices()));
    }
    throw Error(ErrorKind::BadLabeling, "missing label sidecar " + label_sidecar_path(mtx_path).string());
  }
  return load_element(g);
}

ElementGraph mini_double_element() {
  const ElementGeometry geometry{2, 2};
  std::vector<std::pair<Eigen::Index, Eigen::Index>> entries;
  std::vector<VertexLabel> labels;
  for (int z = 0; z < 2; ++z) {
    for (int t = 1; t <= 2; ++t) {
      for (int j = 0; j < 2; ++j) {
        entries.emplace_back(geometry.index(z, t, j), geometry.index(z, 3 - t, 1 - j));
        labels.push_back({z, t, j});
      }
    }
  }
  ElementGraph e{graph_from_entries(geometry.num_vertices(), entries, std::move(labels), "z,t,j"), geometry};
  e.ground_energy = -1.0;
  e.ground_basis = Eigen::MatrixXcd::Zero(geometry.num_vertices(), 4);
  for (int z = 0; z < 2; ++z) {
    for (int t = 1; t <= 2; ++t) {
      for (int j = 0; j < 2; ++j) {
        const double sign_j = (j == 0) ? 1.0 : -1.0;
        const double sign_t = (t == 1) ? 1.0 : -1.0;
        // |+>_t |->_j and |->_t |+>_j
        e.ground_basis(geometry.index(z, t, j), 2 * z + 0) = 0.5 * sign_j;
        e.ground_basis(geometry.index(z, t, j), 2 * z + 1) = 0.5 * sign_t;
      }
    }
  }
  e.source = ElementSource::MiniDouble;
  e.node_rule = NodeRule::all_times(geometry.t_max);
  e.block_constant = 0.5;
  return e;
}

std::filesystem::path asset_directory() {
  if (const char* env = std::getenv("BHXY_ASSET_DIR"); env != nullptr && *env != '\0') return env;
  return BHXY_DEFAULT_ASSET_DIR;
}

std::optional<std::filesystem::path> locate_g0_asset() {
  const auto p = asset_directory() / "g0.mtx";
  if (std::filesystem::exists(p)) return p;
  return std::nullopt;
}

ElementGraph resolve_element(const std::string& source) {
  if (source == "mini") return mini_double_element();
  if (source == "g0") {
    const auto p = locate_g0_asset();
    if (!p) throw Error(ErrorKind::IoError, "g0 asset not found in " + asset_directory().string());
    return load_element(*p);
  }
  return load_element(std::filesystem::path(source));
}

ConformanceReport validate_element(const ElementGraph& element, double tol) {
  ConformanceReport report;
  report.tolerance = tol;
  const Eigen::MatrixXd a = element.graph.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "element diagonalization failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  report.lambda_min = values[0];
  report.norm = std::max(std::abs(values[0]), std::abs(values[values.size() - 1]));
  report.lambda_min_matches_e1 = std::abs(report.lambda_min - kE1) <= tol;
  while (report.ground_dim < values.size() && values[report.ground_dim] <= values[0] + tol) ++report.ground_dim;

  const Eigen::MatrixXcd a_c = a.cast<cd>();
  for (Eigen::Index c = 0; c < element.ground_basis.cols(); ++c) {
    const Eigen::VectorXcd psi = element.ground_basis.col(c);
    report.basis_residual = std::max(report.basis_residual, (a_c * psi - element.ground_energy * psi).norm());
  }
  report.orthonormality_error = orthonormality_error<cd>(element.ground_basis);

  const Eigen::MatrixXcd numerical = solver.eigenvectors().leftCols(report.ground_dim).cast<cd>();
  const SpanComparison cmp = compare_spans<cd>(numerical, element.ground_basis);
  report.span_sine = cmp.max_sine;
  report.span_match = cmp.match(1e-8) && report.orthonormality_error <= 1e-12;
  return report;
}

Eigen::Matrix4cd node_block_matrix(const ElementGraph& element, int t) {
  const ElementGeometry& g = element.geometry;
  Eigen::MatrixXcd projected = Eigen::MatrixXcd::Zero(element.ground_basis.rows(), 4);
  for (int z = 0; z < 2; ++z) {
    for (int j = 0; j < g.j_max; ++j) {
      const Eigen::Index v = g.index(z, t, j);
      projected.row(v) = element.ground_basis.row(v);
    }
  }
  return element.ground_basis.adjoint() * projected;
}

}  // namespace bhxy
