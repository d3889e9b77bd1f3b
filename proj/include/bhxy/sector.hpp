#pragma once

#include "bhxy/basis.hpp"
#include "bhxy/eigensolver.hpp"
#include "bhxy/graph.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <variant>

namespace bhxy {

/// Materialize sector operators up to this many basis states.
inline constexpr Eigen::Index kMaterializeLimit = 100'000;

using SectorBasis = std::variant<std::shared_ptr<const HammingBasis>, std::shared_ptr<const BosonBasis>>;

Eigen::Index basis_size(const SectorBasis& basis);

/// Real symmetric operator on an enumerated sector basis. The row kernel is
/// the primary definition; a sparse copy is kept when the sector is small
/// enough. Applying the operator yields (M - shift) x.
class SectorOperator {
 public:
  using RowEntries = std::vector<std::pair<Eigen::Index, double>>;
  using RowKernel = std::function<void(Eigen::Index row, RowEntries& entries)>;

  SectorOperator(SectorBasis basis, RowKernel kernel, double shift = 0.0);

  Eigen::Index dim() const { return dim_; }
  const SectorBasis& basis() const { return basis_; }
  double shift() const { return shift_; }

  /// Copy with a different recorded shift.
  SectorOperator shifted(double shift) const;

  void row(Eigen::Index r, RowEntries& entries) const { kernel_(r, entries); }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  LinearOperator as_linear_operator() const;

  bool is_materialized() const { return static_cast<bool>(matrix_); }
  /// Sparse form of M - shift (builds it on demand, ignoring the size limit).
  SparseMatrix sparse() const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(sparse()); }

 private:
  SectorBasis basis_;
  RowKernel kernel_;
  double shift_;
  Eigen::Index dim_;
  std::shared_ptr<const SparseMatrix> matrix_;
};

/// Lowest eigenpair of (M - shift): dense up to kDenseLimit, Lanczos above.
Eigenpair lowest_eigenpair(const SectorOperator& op, double tol);

/// XY operator with self-loop fields restricted to Hamming weight N.
SectorOperator xy_sector(const Graph& g, int n);
/// Smallest eigenvalue of xy_sector(g, n).
double theta(const Graph& g, int n, double tol = 1e-10);

/// Calls `emit(target_occupation, amplitude)` for every off-diagonal entry of
/// the Bose-Hubbard row of `occupation`, and returns the diagonal entry.
double bose_hubbard_row(const Graph& g, std::span<const Occupation> occupation,
                        const std::function<void(std::span<const Occupation>, double)>& emit);

/// N-boson Bose-Hubbard operator in occupation coordinates: hopping
/// sqrt(n_i (n_j + 1)) along edges, diagonal sum_k n_k(n_k-1) + sum_{loops} n_k.
SectorOperator bose_hubbard(const Graph& g, int n);
/// H(G,N): the Bose-Hubbard operator shifted by N mu(G).
SectorOperator bose_hubbard_shifted(const Graph& g, int n, double tol = 1e-10);
/// The on-site interaction sum_k n_k(n_k - 1) on BosonBasis(K, N) (diagonal).
Eigen::VectorXd interaction_diagonal(const BosonBasis& basis);

struct Lambda1Result {
  double lambda1 = 0.0;
  double mu = 0.0;
  double ground_energy = 0.0;
  Eigen::Index basis_dim = 0;
  bool converged = false;
  Eigen::VectorXd ground_state;
};

/// Smallest eigenvalue of H(G,N) with the pieces that produced it.
Lambda1Result lambda1_detail(const Graph& g, int n, double tol = 1e-10);
double lambda1(const Graph& g, int n, double tol = 1e-10);

/// Bose-Hubbard restricted to occupations <= 1, indexed by HammingBasis(K,N).
SectorOperator hardcore_restriction(const Graph& g, int n);

bool is_frustration_free(const Graph& g, int n, double threshold, double tol = 1e-10);

}  // namespace bhxy
