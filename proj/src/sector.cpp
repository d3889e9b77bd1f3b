#include "bhxy/sector.hpp"

#include "bhxy/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bhxy {
namespace {

std::shared_ptr<const SparseMatrix> build_sparse(Eigen::Index dim, const SectorOperator::RowKernel& kernel,
                                                 double shift) {
  std::vector<Triplet> triplets;
  SectorOperator::RowEntries entries;
  for (Eigen::Index r = 0; r < dim; ++r) {
    entries.clear();
    kernel(r, entries);
    for (auto [c, v] : entries) triplets.emplace_back(r, c, v);
    if (shift != 0.0) triplets.emplace_back(r, r, -shift);
  }
  auto m = std::make_shared<SparseMatrix>(dim, dim);
  m->setFromTriplets(triplets.begin(), triplets.end());
  m->prune(0.0, 0.0);
  m->makeCompressed();
  return m;
}

}  // namespace

Eigen::Index basis_size(const SectorBasis& basis) {
  return std::visit([](const auto& b) { return b->size(); }, basis);
}

SectorOperator::SectorOperator(SectorBasis basis, RowKernel kernel, double shift)
    : basis_(std::move(basis)), kernel_(std::move(kernel)), shift_(shift), dim_(basis_size(basis_)) {
  if (dim_ <= kMaterializeLimit) matrix_ = build_sparse(dim_, kernel_, shift_);
}

SectorOperator SectorOperator::shifted(double shift) const { return SectorOperator(basis_, kernel_, shift); }

void SectorOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (matrix_) {
    y.noalias() = *matrix_ * x;
    return;
  }
  y.resize(dim_);
  RowEntries entries;
  for (Eigen::Index r = 0; r < dim_; ++r) {
    entries.clear();
    kernel_(r, entries);
    double acc = -shift_ * x[r];
    for (auto [c, v] : entries) acc += v * x[c];
    y[r] = acc;
  }
}

LinearOperator SectorOperator::as_linear_operator() const {
  return [this](const Eigen::VectorXd& x, Eigen::VectorXd& y) { apply(x, y); };
}

SparseMatrix SectorOperator::sparse() const {
  if (matrix_) return *matrix_;
  return *build_sparse(dim_, kernel_, shift_);
}

Eigenpair lowest_eigenpair(const SectorOperator& op, double tol) {
  if (op.dim() <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.dense());
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "dense solver failed");
    Eigenpair p;
    p.value = solver.eigenvalues()[0];
    p.vector = solver.eigenvectors().col(0);
    p.converged = true;
    return p;
  }
  LanczosOptions options;
  options.tol = tol;
  Eigenpair p = lanczos_lowest(op.dim(), op.as_linear_operator(), options);
  if (!p.converged) {
    throw Error(ErrorKind::SolverNoConvergence, "sector Lanczos: " + std::to_string(p.iterations) +
                                                    " matvecs, residual " + std::to_string(p.residual));
  }
  return p;
}

// --- XY sector -------------------------------------------------------------

SectorOperator xy_sector(const Graph& g, int n) {
  const int k = static_cast<int>(g.num_vertices());
  if (n < 0 || n > k) throw Error(ErrorKind::BadWeight, "N=" + std::to_string(n) + " with K=" + std::to_string(k));
  auto basis = std::make_shared<const HammingBasis>(k, n);
  auto kernel = [g, basis](Eigen::Index row, SectorOperator::RowEntries& entries) {
    const auto p = basis->positions(row);
    std::vector<int> moved(p.begin(), p.end());
    double diagonal = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int v = p[i];
      if (g.has_self_loop(v)) diagonal += 1.0;
      for (SparseMatrix::InnerIterator it(g.adjacency(), v); it; ++it) {
        const int u = static_cast<int>(it.col());
        if (u == v || std::binary_search(p.begin(), p.end(), u)) continue;
        std::copy(p.begin(), p.end(), moved.begin());
        moved[i] = u;
        std::sort(moved.begin(), moved.end());
        entries.emplace_back(basis->rank(moved), 1.0);
      }
    }
    if (diagonal != 0.0) entries.emplace_back(row, diagonal);
  };
  return SectorOperator(basis, kernel);
}

double theta(const Graph& g, int n, double tol) { return lowest_eigenpair(xy_sector(g, n), tol).value; }

// --- Bose-Hubbard ----------------------------------------------------------

double bose_hubbard_row(const Graph& g, std::span<const Occupation> occupation,
                        const std::function<void(std::span<const Occupation>, double)>& emit) {
  std::vector<Occupation> target(occupation.begin(), occupation.end());
  double diagonal = 0.0;
  for (std::size_t v = 0; v < occupation.size(); ++v) {
    const double nv = occupation[v];
    if (nv == 0) continue;
    diagonal += nv * (nv - 1.0);
    for (SparseMatrix::InnerIterator it(g.adjacency(), static_cast<Eigen::Index>(v)); it; ++it) {
      const auto u = static_cast<std::size_t>(it.col());
      if (u == v) {
        diagonal += nv;
        continue;
      }
      const double amplitude = std::sqrt(nv * (occupation[u] + 1.0));
      --target[v];
      ++target[u];
      emit(target, amplitude);
      ++target[v];
      --target[u];
    }
  }
  return diagonal;
}

SectorOperator bose_hubbard(const Graph& g, int n) {
  if (n < 0) throw Error(ErrorKind::BadWeight, "negative particle number");
  auto basis = std::make_shared<const BosonBasis>(static_cast<int>(g.num_vertices()), n);
  auto kernel = [g, basis](Eigen::Index row, SectorOperator::RowEntries& entries) {
    const double diagonal = bose_hubbard_row(g, basis->occupation(row), [&](auto target, double amplitude) {
      entries.emplace_back(basis->rank(target), amplitude);
    });
    if (diagonal != 0.0) entries.emplace_back(row, diagonal);
  };
  return SectorOperator(basis, kernel);
}

SectorOperator bose_hubbard_shifted(const Graph& g, int n, double tol) {
  return bose_hubbard(g, n).shifted(n * mu(g, tol));
}

Eigen::VectorXd interaction_diagonal(const BosonBasis& basis) {
  Eigen::VectorXd d(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    double acc = 0.0;
    for (Occupation nv : basis.occupation(i)) acc += static_cast<double>(nv) * (nv - 1.0);
    d[i] = acc;
  }
  return d;
}

Lambda1Result lambda1_detail(const Graph& g, int n, double tol) {
  if (n < 0) throw Error(ErrorKind::BadWeight, "negative particle number");
  Lambda1Result r;
  r.mu = mu(g, tol);
  const SectorOperator op = bose_hubbard(g, n);
  const Eigenpair ground = lowest_eigenpair(op, tol);
  r.ground_energy = ground.value;
  r.lambda1 = ground.value - n * r.mu;
  r.basis_dim = op.dim();
  r.converged = ground.converged;
  r.ground_state = ground.vector;
  return r;
}

double lambda1(const Graph& g, int n, double tol) { return lambda1_detail(g, n, tol).lambda1; }

SectorOperator hardcore_restriction(const Graph& g, int n) {
  const int k = static_cast<int>(g.num_vertices());
  if (n < 0 || n > k) throw Error(ErrorKind::BadWeight, "N=" + std::to_string(n) + " with K=" + std::to_string(k));
  auto basis = std::make_shared<const HammingBasis>(k, n);
  auto kernel = [g, basis, k](Eigen::Index row, SectorOperator::RowEntries& entries) {
    std::vector<Occupation> occupation(static_cast<std::size_t>(k), 0);
    for (int v : basis->positions(row)) occupation[static_cast<std::size_t>(v)] = 1;
    std::vector<int> sites;
    const double diagonal = bose_hubbard_row(g, occupation, [&](std::span<const Occupation> target, double amplitude) {
      sites.clear();
      for (int v = 0; v < k; ++v) {
        const Occupation nv = target[static_cast<std::size_t>(v)];
        if (nv > 1) return;
        if (nv == 1) sites.push_back(v);
      }
      entries.emplace_back(basis->rank(sites), amplitude);
    });
    if (diagonal != 0.0) entries.emplace_back(row, diagonal);
  };
  return SectorOperator(basis, kernel);
}

bool is_frustration_free(const Graph& g, int n, double threshold, double tol) {
  return lambda1(g, n, tol) <= threshold;
}

}  // namespace bhxy
