#pragma once

#include "bhxy/eigensolver.hpp"
#include "bhxy/error.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace bhxy {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// 1e-8 * max(1, ||op||_1).
double default_null_threshold(const Eigen::MatrixXd& op);

/// Spectrum split at a nullspace threshold. `gamma` is the smallest
/// eigenvalue above the threshold, or +inf when the operator vanishes.
struct GapResult {
  double lambda_min = 0.0;
  double gamma = kInfinity;
  Eigen::Index null_dim = 0;
  Eigen::Index dim = 0;
  double threshold = 0.0;
  bool converged = true;
};

/// Throws NotPSD when the smallest eigenvalue is below -threshold.
GapResult gamma_of(const Eigen::MatrixXd& op, double threshold);
/// Sparse variant: dense up to kDenseLimit, Lanczos with deflation above.
GapResult gamma_of(const SparseMatrix& op, double threshold);

/// Orthonormal columns spanning the eigenvectors with eigenvalue below the
/// threshold. May have zero columns.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& op, double threshold);

/// Eigenvectors of a Hermitian matrix whose eigenvalues lie within `window`
/// of the smallest one.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lowest_eigenspace(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& op, double window) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(op);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "dense solver failed");
  const auto& values = solver.eigenvalues();
  Eigen::Index count = 0;
  while (count < values.size() && values[count] <= values[0] + window) ++count;
  return solver.eigenvectors().leftCols(count);
}

template <typename Scalar>
double orthonormality_error(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& basis) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat gram = basis.adjoint() * basis;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

/// Matrix of <b_i| op |b_j> over an orthonormal column basis.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> restrict(
    const Eigen::MatrixXd& op, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& basis,
    double orthonormality_tol = 1e-10) {
  if (basis.rows() != op.rows()) throw Error(ErrorKind::DimensionMismatch, "basis length != operator dimension");
  if (basis.cols() > 0 && orthonormality_error(basis) > orthonormality_tol) {
    throw Error(ErrorKind::NotOrthonormal, "restriction basis is not orthonormal");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> r = basis.adjoint() * op.template cast<Scalar>() * basis;
  // Hermitian part; removes rounding asymmetry.
  return (r + r.adjoint()) / Scalar(2);
}

/// Largest principal-angle sine between the spans of two orthonormal column
/// sets; 1 when the dimensions differ.
struct SpanComparison {
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  double max_sine = 1.0;
  bool match(double threshold) const { return dim_a == dim_b && max_sine <= threshold; }
};

template <typename Scalar>
SpanComparison compare_spans(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  SpanComparison cmp{a.cols(), b.cols(), 1.0};
  if (a.cols() != b.cols() || a.rows() != b.rows()) return cmp;
  if (a.cols() == 0) {
    cmp.max_sine = 0.0;
    return cmp;
  }
  // sin of the largest angle is the norm of the part of b outside span(a), and vice versa.
  const Mat ra = b - a * (a.adjoint() * b);
  const Mat rb = a - b * (b.adjoint() * a);
  Eigen::JacobiSVD<Mat> sa(ra), sb(rb);
  cmp.max_sine = std::max(sa.singularValues()[0], sb.singularValues()[0]);
  return cmp;
}

/// Fact-1 upper bound gamma(H_B|_S), S = null(H_A). Throws EmptyNullspace or
/// NotPSD. Returns +inf when H_B vanishes on S.
double variational_upper(const Eigen::MatrixXd& h_a, const Eigen::MatrixXd& h_b, double threshold);

/// Nullspace Projection Lemma bound c d / (d + ||H_B||). `d` may be +inf.
double npl_lower(double c, double d, double norm_b);

struct GapCertificate {
  std::string name_a;
  std::string name_b;
  double c = kInfinity;          // gamma(H_B restricted to null(H_A))
  double d = kInfinity;          // gamma(H_A), or the certified bound carried in
  double norm_b = 0.0;           // upper bound on ||H_B||
  double lower_bound = 0.0;
  std::optional<double> upper_bound;
  std::optional<double> measured_gamma;
  Eigen::Index null_dim_a = 0;
  double threshold = 0.0;
  /// "npl", or "monotone" when S is empty or H_B vanishes on S.
  std::string rule;

  /// lower <= measured <= upper (+slack) for whichever values are present.
  bool consistent(double slack) const;
};

struct CertifyOptions {
  double threshold = 0.0;                // <= 0: default_null_threshold(H_A + H_B)
  std::optional<double> norm_b_bound;    // supply a cheap bound instead of computing ||H_B||
  std::optional<double> d_bound;         // certified lower bound on gamma(H_A) to use for d
  std::optional<double> c_bound;         // certified lower bound on gamma(H_B|_S) to use for c
  bool measure = true;                   // also compute gamma(H_A + H_B)
};

/// One Fact-1 / NPL certificate for H_A + H_B.
GapCertificate certify(const Eigen::MatrixXd& h_a, const Eigen::MatrixXd& h_b, const CertifyOptions& options = {},
                       std::string name_a = "H_A", std::string name_b = "H_B");

/// H_k = H_{k-1} + increment_k. Each step's d is the previous step's certified
/// lower bound (the first uses the measured gamma of the base).
struct ChainStep {
  std::string name;
  Eigen::MatrixXd increment;
  std::optional<double> norm_bound;
};

struct CertificateChain {
  std::string base_name;
  double base_gamma = kInfinity;
  std::vector<GapCertificate> steps;
  double final_lower_bound = 0.0;
  std::optional<double> final_measured_gamma;
};

CertificateChain certify_chain(const Eigen::MatrixXd& base, const std::vector<ChainStep>& steps, double threshold,
                               std::string base_name = "H_0");

nlohmann::json to_json(const GapResult& r);
nlohmann::json to_json(const GapCertificate& c);
nlohmann::json to_json(const CertificateChain& chain);

/// Seeded random PSD matrix of the given rank (rank <= dim).
Eigen::MatrixXd random_psd(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed);

}  // namespace bhxy
