#include "bhxy/graph.hpp"

#include "bhxy/eigensolver.hpp"
#include "bhxy/error.hpp"

#include <algorithm>
#include <cmath>

namespace bhxy {

Graph::Graph(SparseMatrix adjacency, std::vector<VertexLabel> labels, std::string label_scheme)
    : adjacency_(std::move(adjacency)), labels_(std::move(labels)), label_scheme_(std::move(label_scheme)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw Error(ErrorKind::NotSymmetric, "adjacency is " + std::to_string(adjacency_.rows()) + "x" +
                                             std::to_string(adjacency_.cols()));
  }
  if (adjacency_.rows() == 0) throw Error(ErrorKind::EmptyGraph, "graph must have at least one vertex");
  adjacency_.prune(0.0, 0.0);
  adjacency_.makeCompressed();

  for (Eigen::Index r = 0; r < adjacency_.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adjacency_, r); it; ++it) {
      if (it.value() != 1.0) {
        throw Error(ErrorKind::NonBinaryEntry, "entry (" + std::to_string(it.row()) + "," +
                                                   std::to_string(it.col()) +
                                                   ") = " + std::to_string(it.value()));
      }
    }
  }
  SparseMatrix transposed = adjacency_.transpose();
  if ((transposed - adjacency_).norm() != 0.0) {
    throw Error(ErrorKind::NotSymmetric, "adjacency matrix is not symmetric");
  }
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != adjacency_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "label count does not match vertex count");
  }

  self_loop_.assign(static_cast<std::size_t>(adjacency_.rows()), false);
  for (Eigen::Index r = 0; r < adjacency_.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adjacency_, r); it; ++it) {
      if (it.col() == r) self_loop_[static_cast<std::size_t>(r)] = true;
    }
  }
}

int Graph::degree(Eigen::Index v) const {
  int d = 0;
  for (SparseMatrix::InnerIterator it(adjacency_, v); it; ++it) {
    if (it.col() != v) ++d;
  }
  return d;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices()) return false;
  return (a.adjacency_ - b.adjacency_).norm() == 0.0;
}

Graph graph_from_entries(Eigen::Index num_vertices,
                         const std::vector<std::pair<Eigen::Index, Eigen::Index>>& entries,
                         std::vector<VertexLabel> labels, std::string label_scheme) {
  std::vector<Triplet> triplets;
  triplets.reserve(entries.size());
  for (auto [i, j] : entries) {
    if (i < 0 || j < 0 || i >= num_vertices || j >= num_vertices) {
      throw Error(ErrorKind::DimensionMismatch, "entry outside the vertex range");
    }
    triplets.emplace_back(i, j, 1.0);
  }
  SparseMatrix a(num_vertices, num_vertices);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return Graph(std::move(a), std::move(labels), std::move(label_scheme));
}

bool is_simple(const Graph& g) {
  for (Eigen::Index v = 0; v < g.num_vertices(); ++v) {
    if (g.has_self_loop(v)) return false;
  }
  return true;
}

bool has_all_self_loops(const Graph& g) {
  for (Eigen::Index v = 0; v < g.num_vertices(); ++v) {
    if (!g.has_self_loop(v)) return false;
  }
  return true;
}

Graph strip_all_self_loops(const Graph& g) {
  for (Eigen::Index v = 0; v < g.num_vertices(); ++v) {
    if (!g.has_self_loop(v)) throw Error(ErrorKind::MissingSelfLoop, "vertex " + std::to_string(v));
  }
  SparseMatrix identity(g.num_vertices(), g.num_vertices());
  identity.setIdentity();
  SparseMatrix stripped = g.adjacency() - identity;
  return Graph(std::move(stripped), g.labels(), g.label_scheme());
}

Graph add_all_self_loops(const Graph& g) {
  SparseMatrix identity(g.num_vertices(), g.num_vertices());
  identity.setIdentity();
  SparseMatrix looped = g.adjacency() + identity;
  return Graph(std::move(looped), g.labels(), g.label_scheme());
}

int max_degree(const Graph& g) {
  int best = 0;
  for (Eigen::Index v = 0; v < g.num_vertices(); ++v) best = std::max(best, g.degree(v));
  return best;
}

double one_norm(const SparseMatrix& a) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

double default_eigen_tolerance(const Graph& g) { return 1e-10 * std::max(1.0, one_norm(g.adjacency())); }

double mu(const Graph& g, double tol) {
  if (tol <= 0.0) tol = default_eigen_tolerance(g);
  return smallest_eigenvalue(g.adjacency(), tol);
}

SpectralSummary spectral_summary(const Graph& g, double tol) {
  SpectralSummary s;
  s.tolerance_used = tol > 0.0 ? tol : default_eigen_tolerance(g);
  s.mu = mu(g, s.tolerance_used);
  s.norm_bound = one_norm(g.adjacency());
  return s;
}

}  // namespace bhxy
