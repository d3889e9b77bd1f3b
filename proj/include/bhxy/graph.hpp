#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace bhxy {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Structured vertex label, e.g. (q,z,t,j). Opaque to the graph itself.
using VertexLabel = std::vector<int>;

/// Undirected graph given by a symmetric 0-1 adjacency matrix. A diagonal
/// entry of 1 is a self-loop. Immutable once constructed.
class Graph {
 public:
  /// Validates symmetry and 0-1 entries; throws NotSymmetric, NonBinaryEntry
  /// or EmptyGraph. Explicit zeros are dropped.
  explicit Graph(SparseMatrix adjacency, std::vector<VertexLabel> labels = {},
                 std::string label_scheme = {});

  Eigen::Index num_vertices() const { return adjacency_.rows(); }
  const SparseMatrix& adjacency() const { return adjacency_; }

  bool has_self_loop(Eigen::Index v) const { return self_loop_[static_cast<std::size_t>(v)]; }
  /// Number of neighbours other than v itself.
  int degree(Eigen::Index v) const;

  const std::vector<VertexLabel>& labels() const { return labels_; }
  const std::string& label_scheme() const { return label_scheme_; }

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(adjacency_); }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  SparseMatrix adjacency_;
  std::vector<bool> self_loop_;
  std::vector<VertexLabel> labels_;
  std::string label_scheme_;
};

/// Builds a graph from a dense square matrix.
template <typename Derived>
Graph new_graph(const Eigen::MatrixBase<Derived>& adjacency) {
  SparseMatrix sparse = adjacency.template cast<double>().sparseView();
  return Graph(std::move(sparse));
}

/// Builds a graph from an explicit list of (row, col) positions holding 1.
/// Both orientations of an edge must be listed.
Graph graph_from_entries(Eigen::Index num_vertices,
                         const std::vector<std::pair<Eigen::Index, Eigen::Index>>& entries,
                         std::vector<VertexLabel> labels = {}, std::string label_scheme = {});

bool is_simple(const Graph& g);
bool has_all_self_loops(const Graph& g);

/// A - I. Throws MissingSelfLoop naming the first (0-based) vertex without one.
Graph strip_all_self_loops(const Graph& g);
/// A + I. Throws NonBinaryEntry if a loop is already present.
Graph add_all_self_loops(const Graph& g);

int max_degree(const Graph& g);
/// Maximum absolute row sum; an upper bound on the operator norm.
double one_norm(const SparseMatrix& a);

/// 1e-10 * max(1, ||A||_1).
double default_eigen_tolerance(const Graph& g);

/// Smallest eigenvalue of the adjacency matrix. `tol <= 0` selects the default.
double mu(const Graph& g, double tol = 0.0);

struct SpectralSummary {
  double mu = 0.0;
  double norm_bound = 0.0;
  double tolerance_used = 0.0;
};

SpectralSummary spectral_summary(const Graph& g, double tol = 0.0);

}  // namespace bhxy
