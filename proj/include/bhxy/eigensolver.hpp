#pragma once

#include "bhxy/graph.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace bhxy {

/// y = A x for a real symmetric A. Implementations must not alias x and y.
using LinearOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

/// Above this dimension the iterative solver is used.
inline constexpr Eigen::Index kDenseLimit = 512;

struct LanczosOptions {
  int krylov_size = 100;
  int max_restarts = 200;
  /// Absolute residual target ||A x - theta x||.
  double tol = 1e-10;
  std::uint64_t seed = 20160914;
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Lowest eigenpair of a symmetric operator by explicitly restarted Lanczos
/// with full reorthogonalization. If `locked` is given (orthonormal columns)
/// the search runs in its orthogonal complement.
Eigenpair lanczos_lowest(Eigen::Index dim, const LinearOperator& apply, const LanczosOptions& options = {},
                         const Eigen::MatrixXd* locked = nullptr);

/// Lowest `count` eigenpairs by repeated deflation.
std::vector<Eigenpair> lanczos_lowest_k(Eigen::Index dim, const LinearOperator& apply, int count,
                                        const LanczosOptions& options = {});

/// Lowest eigenpair using a dense solver up to kDenseLimit and Lanczos above.
/// Throws SolverNoConvergence with iteration diagnostics.
Eigenpair lowest_eigenpair(const SparseMatrix& a, double tol);

inline double smallest_eigenvalue(const SparseMatrix& a, double tol) { return lowest_eigenpair(a, tol).value; }

LinearOperator as_operator(const SparseMatrix& a);

}  // namespace bhxy
