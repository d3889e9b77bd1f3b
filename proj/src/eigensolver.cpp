#include "bhxy/eigensolver.hpp"

#include "bhxy/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace bhxy {
namespace {

void project_out(Eigen::VectorXd& w, const Eigen::MatrixXd* locked) {
  if (locked == nullptr || locked->cols() == 0) return;
  w.noalias() -= *locked * (locked->transpose() * w);
}

Eigen::VectorXd random_start(Eigen::Index dim, std::uint64_t seed, const Eigen::MatrixXd* locked) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  project_out(v, locked);
  project_out(v, locked);
  return v.normalized();
}

}  // namespace

Eigenpair lanczos_lowest(Eigen::Index dim, const LinearOperator& apply, const LanczosOptions& options,
                         const Eigen::MatrixXd* locked) {
  if (dim <= 0) throw Error(ErrorKind::DimensionMismatch, "operator dimension must be positive");
  const Eigen::Index free_dim = dim - (locked ? locked->cols() : 0);
  if (free_dim <= 0) throw Error(ErrorKind::DimensionMismatch, "deflation exhausts the space");
  const Eigen::Index m = std::min<Eigen::Index>(options.krylov_size, free_dim);

  Eigenpair result;
  Eigen::VectorXd v = random_start(dim, options.seed, locked);
  Eigen::MatrixXd basis(dim, m + 1);
  Eigen::VectorXd alpha(m), beta(m);
  Eigen::VectorXd w(dim);

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    basis.col(0) = v;
    Eigen::Index steps = 0;
    bool invariant = false;
    for (Eigen::Index k = 0; k < m; ++k) {
      apply(basis.col(k), w);
      ++result.iterations;
      alpha[k] = basis.col(k).dot(w);
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        auto q = basis.leftCols(k + 1);
        w.noalias() -= q * (q.transpose() * w);
        project_out(w, locked);
      }
      beta[k] = w.norm();
      steps = k + 1;
      const double scale = std::max(1.0, std::abs(alpha[k]));
      if (beta[k] <= 1e-13 * scale) {
        invariant = true;
        break;
      }
      basis.col(k + 1) = w / beta[k];
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index k = 0; k < steps; ++k) {
      tri(k, k) = alpha[k];
      if (k + 1 < steps) tri(k, k + 1) = tri(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(tri);
    const Eigen::VectorXd s = ritz.eigenvectors().col(0);
    result.value = ritz.eigenvalues()[0];
    result.vector = (basis.leftCols(steps) * s).normalized();

    // Explicit residual; the Lanczos estimate drifts after restarts.
    Eigen::VectorXd ax(dim);
    apply(result.vector, ax);
    result.residual = (ax - result.value * result.vector).norm();
    if (result.residual <= options.tol || (invariant && result.residual <= 10 * options.tol)) {
      result.converged = true;
      return result;
    }
    v = result.vector;
  }
  return result;
}

std::vector<Eigenpair> lanczos_lowest_k(Eigen::Index dim, const LinearOperator& apply, int count,
                                        const LanczosOptions& options) {
  std::vector<Eigenpair> pairs;
  Eigen::MatrixXd locked(dim, 0);
  for (int i = 0; i < count && locked.cols() < dim; ++i) {
    LanczosOptions opt = options;
    opt.seed = options.seed + static_cast<std::uint64_t>(i);
    Eigenpair p = lanczos_lowest(dim, apply, opt, &locked);
    if (!p.converged) {
      throw Error(ErrorKind::SolverNoConvergence, "deflated Lanczos stalled at pair " + std::to_string(i) +
                                                      " (residual " + std::to_string(p.residual) + ")");
    }
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    Eigen::VectorXd x = p.vector;
    x -= locked.leftCols(locked.cols() - 1) * (locked.leftCols(locked.cols() - 1).transpose() * x);
    locked.col(locked.cols() - 1) = x.normalized();
    pairs.push_back(std::move(p));
  }
  return pairs;
}

LinearOperator as_operator(const SparseMatrix& a) {
  return [&a](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = a * x; };
}

Eigenpair lowest_eigenpair(const SparseMatrix& a, double tol) {
  if (a.rows() <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(a)};
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::SolverNoConvergence, "dense symmetric eigensolver failed");
    }
    Eigenpair p;
    p.value = solver.eigenvalues()[0];
    p.vector = solver.eigenvectors().col(0);
    p.converged = true;
    return p;
  }
  LanczosOptions options;
  options.tol = tol;
  Eigenpair p = lanczos_lowest(a.rows(), as_operator(a), options);
  if (!p.converged) {
    throw Error(ErrorKind::SolverNoConvergence, "Lanczos: " + std::to_string(p.iterations) +
                                                    " matvecs, residual " + std::to_string(p.residual) +
                                                    " > tol " + std::to_string(tol));
  }
  return p;
}

}  // namespace bhxy
