#include "bhxy/spectral.hpp"

#include <cmath>
#include <random>

namespace bhxy {
namespace {

double dense_one_norm(const Eigen::MatrixXd& op) {
  return op.rows() == 0 ? 0.0 : op.cwiseAbs().rowwise().sum().maxCoeff();
}

GapResult split_spectrum(const Eigen::VectorXd& values, double threshold) {
  GapResult r;
  r.dim = values.size();
  r.threshold = threshold;
  r.lambda_min = values.size() ? values[0] : 0.0;
  if (r.lambda_min < -threshold) {
    throw Error(ErrorKind::NotPSD, "smallest eigenvalue " + std::to_string(r.lambda_min) + " < -" +
                                       std::to_string(threshold));
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] <= threshold) {
      ++r.null_dim;
    } else {
      r.gamma = values[i];
      break;
    }
  }
  return r;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "dense solver failed");
  return solver.eigenvalues();
}

double spectral_norm_psd(const Eigen::MatrixXd& op) {
  if (op.rows() == 0) return 0.0;
  const Eigen::VectorXd v = symmetric_eigenvalues(op);
  return std::max(std::abs(v[0]), std::abs(v[v.size() - 1]));
}

}  // namespace

double default_null_threshold(const Eigen::MatrixXd& op) { return 1e-8 * std::max(1.0, dense_one_norm(op)); }

GapResult gamma_of(const Eigen::MatrixXd& op, double threshold) {
  if (op.rows() != op.cols()) throw Error(ErrorKind::DimensionMismatch, "operator is not square");
  return split_spectrum(symmetric_eigenvalues(op), threshold);
}

GapResult gamma_of(const SparseMatrix& op, double threshold) {
  if (op.rows() <= kDenseLimit) return gamma_of(Eigen::MatrixXd(op), threshold);
  // Shift-and-deflate: peel off eigenpairs until one clears the threshold.
  const LinearOperator apply = as_operator(op);
  LanczosOptions options;
  options.tol = std::min(1e-10, threshold * 1e-2);
  Eigen::MatrixXd locked(op.rows(), 0);
  GapResult r;
  r.dim = op.rows();
  r.threshold = threshold;
  for (Eigen::Index found = 0; found < op.rows(); ++found) {
    options.seed += 1;
    Eigenpair p = lanczos_lowest(op.rows(), apply, options, &locked);
    if (!p.converged) {
      r.converged = false;
      throw Error(ErrorKind::SolverNoConvergence, "deflated Lanczos: residual " + std::to_string(p.residual));
    }
    if (found == 0) {
      r.lambda_min = p.value;
      if (p.value < -threshold) {
        throw Error(ErrorKind::NotPSD, "smallest eigenvalue " + std::to_string(p.value));
      }
    }
    if (p.value > threshold) {
      r.gamma = p.value;
      return r;
    }
    ++r.null_dim;
    Eigen::VectorXd x = p.vector;
    x -= locked * (locked.transpose() * x);
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    locked.col(locked.cols() - 1) = x.normalized();
  }
  return r;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& op, double threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "dense solver failed");
  const GapResult r = split_spectrum(solver.eigenvalues(), threshold);
  return solver.eigenvectors().leftCols(r.null_dim);
}

double variational_upper(const Eigen::MatrixXd& h_a, const Eigen::MatrixXd& h_b, double threshold) {
  if (h_a.rows() != h_b.rows() || h_a.cols() != h_b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "H_A and H_B differ in shape");
  }
  gamma_of(h_b, threshold);  // PSD check
  const Eigen::MatrixXd s = nullspace_basis(h_a, threshold);
  if (s.cols() == 0) throw Error(ErrorKind::EmptyNullspace, "H_A has no nullspace");
  return gamma_of(restrict<double>(h_b, s), threshold).gamma;
}

double npl_lower(double c, double d, double norm_b) {
  if (!(c > 0.0) || !(d > 0.0) || !(norm_b >= 0.0)) {
    throw Error(ErrorKind::NonPositiveInput, "npl_lower needs c>0, d>0, ||H_B||>=0 (got c=" + std::to_string(c) +
                                                 ", d=" + std::to_string(d) + ", norm=" + std::to_string(norm_b) +
                                                 ")");
  }
  if (std::isinf(d)) return c;
  return c * d / (d + norm_b);
}

bool GapCertificate::consistent(double slack) const {
  if (measured_gamma) {
    if (*measured_gamma < lower_bound - slack) return false;
    if (upper_bound && *measured_gamma > *upper_bound + slack) return false;
  }
  if (upper_bound && lower_bound > *upper_bound + slack) return false;
  return true;
}

GapCertificate certify(const Eigen::MatrixXd& h_a, const Eigen::MatrixXd& h_b, const CertifyOptions& options,
                       std::string name_a, std::string name_b) {
  if (h_a.rows() != h_b.rows() || h_a.cols() != h_b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "H_A and H_B differ in shape");
  }
  GapCertificate cert;
  cert.name_a = std::move(name_a);
  cert.name_b = std::move(name_b);
  cert.threshold = options.threshold > 0.0 ? options.threshold : default_null_threshold(h_a + h_b);

  const GapResult gap_a = gamma_of(h_a, cert.threshold);
  gamma_of(h_b, cert.threshold);
  cert.d = options.d_bound ? *options.d_bound : gap_a.gamma;
  cert.norm_b = options.norm_b_bound ? *options.norm_b_bound : spectral_norm_psd(h_b);
  cert.null_dim_a = gap_a.null_dim;

  if (gap_a.null_dim == 0) {
    // H_A + H_B >= H_A > 0.
    cert.rule = "monotone";
    cert.lower_bound = cert.d;
  } else {
    const Eigen::MatrixXd s = nullspace_basis(h_a, cert.threshold);
    const double restricted_gamma = gamma_of(restrict<double>(h_b, s), cert.threshold).gamma;
    if (std::isinf(restricted_gamma)) {
      // H_B annihilates S, so the sum acts as H_A + H_B >= d on the complement.
      cert.rule = "monotone";
      cert.c = kInfinity;
      cert.lower_bound = cert.d;
    } else {
      cert.rule = "npl";
      cert.upper_bound = restricted_gamma;
      cert.c = options.c_bound ? *options.c_bound : restricted_gamma;
      cert.lower_bound = npl_lower(cert.c, cert.d, cert.norm_b);
    }
  }
  if (options.measure) cert.measured_gamma = gamma_of(Eigen::MatrixXd(h_a + h_b), cert.threshold).gamma;
  return cert;
}

CertificateChain certify_chain(const Eigen::MatrixXd& base, const std::vector<ChainStep>& steps, double threshold,
                               std::string base_name) {
  CertificateChain chain;
  chain.base_name = std::move(base_name);
  chain.base_gamma = gamma_of(base, threshold).gamma;
  Eigen::MatrixXd current = base;
  std::string current_name = chain.base_name;
  double carried = chain.base_gamma;
  for (const ChainStep& step : steps) {
    CertifyOptions opt;
    opt.threshold = threshold;
    opt.norm_b_bound = step.norm_bound;
    opt.d_bound = carried;
    GapCertificate cert = certify(current, step.increment, opt, current_name, step.name);
    carried = cert.lower_bound;
    current += step.increment;
    current_name += " + " + step.name;
    chain.steps.push_back(std::move(cert));
  }
  chain.final_lower_bound = carried;
  if (!chain.steps.empty()) {
    chain.final_measured_gamma = chain.steps.back().measured_gamma;
  } else {
    chain.final_measured_gamma = chain.base_gamma;
  }
  return chain;
}

namespace {

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

}  // namespace

nlohmann::json to_json(const GapResult& r) {
  return {{"lambda_min", r.lambda_min}, {"gamma", finite_or_null(r.gamma)}, {"null_dim", r.null_dim},
          {"dim", r.dim},               {"threshold", r.threshold},         {"converged", r.converged}};
}

nlohmann::json to_json(const GapCertificate& c) {
  nlohmann::json j{{"H_A", c.name_a},
                   {"H_B", c.name_b},
                   {"c", finite_or_null(c.c)},
                   {"d", finite_or_null(c.d)},
                   {"norm_B", c.norm_b},
                   {"lower_bound", finite_or_null(c.lower_bound)},
                   {"null_dim_A", c.null_dim_a},
                   {"threshold", c.threshold},
                   {"rule", c.rule}};
  j["upper_bound"] = c.upper_bound ? finite_or_null(*c.upper_bound) : nlohmann::json();
  j["measured_gamma"] = c.measured_gamma ? finite_or_null(*c.measured_gamma) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const CertificateChain& chain) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : chain.steps) steps.push_back(to_json(s));
  nlohmann::json j{{"base", chain.base_name},
                   {"base_gamma", finite_or_null(chain.base_gamma)},
                   {"steps", steps},
                   {"final_lower_bound", finite_or_null(chain.final_lower_bound)}};
  j["final_measured_gamma"] = chain.final_measured_gamma ? finite_or_null(*chain.final_measured_gamma)
                                                         : nlohmann::json();
  return j;
}

Eigen::MatrixXd random_psd(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd factor(dim, rank);
  for (Eigen::Index i = 0; i < factor.size(); ++i) factor.data()[i] = normal(rng);
  Eigen::MatrixXd m = factor * factor.transpose();
  return (m + m.transpose()) / 2.0;
}

}  // namespace bhxy
