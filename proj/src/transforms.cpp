#include "bhxy/transforms.hpp"

#include "bhxy/sector.hpp"
#include "bhxy/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>
#include <set>

namespace bhxy {

Eigen::Index LooplessSet::size() const { return std::count(member.begin(), member.end(), true); }

bool LooplessSet::t_star_holds() const {
  return std::all_of(t_star.begin(), t_star.end(), [](int t) { return t != 0; });
}

Eigen::VectorXd LooplessSet::projector_diagonal() const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(member.size()));
  for (std::size_t v = 0; v < member.size(); ++v) d[static_cast<Eigen::Index>(v)] = member[v] ? 1.0 : 0.0;
  return d;
}

LooplessSet loopless_set(const GateDiagram& d, const ElementGraph& element) {
  const ElementGeometry& geo = element.geometry;
  std::set<Node> covered(d.self_loops.begin(), d.self_loops.end());
  for (const auto& [a, b] : d.edges) {
    covered.insert(a);
    covered.insert(b);
  }
  LooplessSet set;
  set.member.assign(static_cast<std::size_t>(geo.num_vertices()) * static_cast<std::size_t>(d.num_elements), false);
  set.t_star.assign(static_cast<std::size_t>(d.num_elements), 0);
  for (int q = 1; q <= d.num_elements; ++q) {
    for (int t = 1; t <= geo.t_max; ++t) {
      bool both_free = true;
      for (int z = 0; z < 2; ++z) {
        const bool free = !covered.contains(Node{q, z, t});
        both_free = both_free && free;
        if (!free) continue;
        for (int j = 0; j < geo.j_max; ++j) set.member[static_cast<std::size_t>(compiled_index(geo, q, z, t, j))] = true;
      }
      if (both_free && set.t_star[static_cast<std::size_t>(q - 1)] == 0) set.t_star[static_cast<std::size_t>(q - 1)] = t;
    }
  }
  return set;
}

DoubledGraph build_SL(const Graph& base, const LooplessSet& loopless) {
  const Eigen::Index k = base.num_vertices();
  if (static_cast<Eigen::Index>(loopless.member.size()) != k) {
    throw Error(ErrorKind::DimensionMismatch, "loopless set does not match the base graph");
  }
  std::vector<Triplet> triplets;
  const SparseMatrix& a = base.adjacency();
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      for (int d = 0; d < 2; ++d) triplets.emplace_back(2 * r + d, 2 * it.col() + d, 1.0);
    }
  }
  // 2 Pi_+ = [[1,1],[1,1]] on the d register.
  for (Eigen::Index v = 0; v < k; ++v) {
    if (!loopless.contains(v)) continue;
    for (int d = 0; d < 2; ++d)
      for (int e = 0; e < 2; ++e) triplets.emplace_back(2 * v + d, 2 * v + e, 1.0);
  }
  SparseMatrix doubled(2 * k, 2 * k);
  doubled.setFromTriplets(triplets.begin(), triplets.end());
  for (Eigen::Index r = 0; r < doubled.outerSize(); ++r) {
    bool loop = false;
    for (SparseMatrix::InnerIterator it(doubled, r); it; ++it) {
      if (it.value() != 1.0) {
        throw Error(ErrorKind::InternalInvariant, "doubled entry (" + std::to_string(r) + "," +
                                                      std::to_string(it.col()) + ") = " +
                                                      std::to_string(it.value()));
      }
      loop = loop || it.col() == r;
    }
    if (!loop) throw Error(ErrorKind::InternalInvariant, "doubled vertex " + std::to_string(r) + " has no self-loop");
  }

  std::vector<VertexLabel> labels;
  if (!base.labels().empty()) {
    labels.reserve(static_cast<std::size_t>(2 * k));
    for (const VertexLabel& l : base.labels()) {
      for (int d = 0; d < 2; ++d) {
        VertexLabel x = l;
        x.push_back(d);
        labels.push_back(std::move(x));
      }
    }
  }
  const std::string scheme = base.label_scheme().empty() ? std::string("v,d") : base.label_scheme() + ",d";
  return DoubledGraph{base, loopless, Graph(std::move(doubled), std::move(labels), scheme)};
}

Graph build_NSL(const DoubledGraph& sl) { return strip_all_self_loops(sl.result); }

Eigen::MatrixXd doubling_term(const LooplessSet& loopless) {
  const auto k = static_cast<Eigen::Index>(loopless.member.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  for (Eigen::Index v = 0; v < k; ++v) {
    if (loopless.contains(v)) h.block(2 * v, 2 * v, 2, 2).setOnes();
  }
  return h;
}

double lemma4_residual(int num_sites, int particles, int pairs, std::uint64_t seed) {
  const BosonBasis basis(num_sites, particles);
  const BosonBasis doubled(2 * num_sites, particles);
  const Eigen::VectorXd d = interaction_diagonal(basis);
  const Eigen::VectorXd d2 = interaction_diagonal(doubled);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto random_state = [&] {
    Eigen::VectorXcd s(basis.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = {normal(rng), normal(rng)};
    return Eigen::VectorXcd(s.normalized());
  };
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const Eigen::VectorXcd phi = random_state();
    const Eigen::VectorXcd psi = random_state();
    const Eigen::VectorXcd phi_bar = lift_state<std::complex<double>>(basis, doubled, phi);
    const Eigen::VectorXcd psi_bar = lift_state<std::complex<double>>(basis, doubled, psi);
    const std::complex<double> lhs = phi_bar.dot(d2.cast<std::complex<double>>().cwiseProduct(psi_bar));
    const std::complex<double> rhs = 0.5 * phi.dot(d.cast<std::complex<double>>().cwiseProduct(psi));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// --- verification report -----------------------------------------------------

bool Section4Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return !c.checked || c.pass; });
}

const LemmaCheck& Section4Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(ErrorKind::InternalInvariant, "no report item named " + name);
}

namespace {

/// |f>|+-> for each column f, doubled register last.
Eigen::MatrixXd tensor_sign(const Eigen::MatrixXd& f, double sign) {
  Eigen::MatrixXd out(2 * f.rows(), f.cols());
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index v = 0; v < f.rows(); ++v) {
    out.row(2 * v) = s * f.row(v);
    out.row(2 * v + 1) = sign * s * f.row(v);
  }
  return out;
}

LemmaCheck skipped(std::string name, std::string note) {
  LemmaCheck c;
  c.name = std::move(name);
  c.checked = false;
  c.note = std::move(note);
  return c;
}

}  // namespace

Section4Report verify_section4(const GateDiagram& d, const ElementGraph& element, int particles,
                               const Section4Options& options) {
  Section4Report report;
  report.options = options;
  report.element_source = to_string(element.source);
  report.num_elements = d.num_elements;
  report.particles = particles;

  const Graph g = compile(d, element);
  report.num_vertices = g.num_vertices();
  if (2 * g.num_vertices() > options.max_doubled_vertices) {
    throw Error(ErrorKind::BudgetExceeded, "doubled graph would have " + std::to_string(2 * g.num_vertices()) +
                                               " vertices");
  }
  const double e = element.ground_energy;
  const LooplessSet loopless = loopless_set(d, element);
  const DoubledGraph sl = build_SL(g, loopless);
  const Graph nsl = build_NSL(sl);

  const Eigen::MatrixXd a = g.dense();
  const Eigen::MatrixXd a_sl = sl.result.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_g(a), eig_sl(a_sl);
  const double mu_g = eig_g.eigenvalues()[0];
  const double mu_sl = eig_sl.eigenvalues()[0];

  report.e1_gate_graph = std::abs(mu_g - e) <= options.tol;
  report.t_star_holds = loopless.t_star_holds();
  {
    LemmaCheck c{"precondition_e1_gate_graph", true, mu_g, e, std::abs(mu_g - e), options.tol, report.e1_gate_graph,
                 "mu(G) must equal the element ground energy"};
    report.checks.push_back(c);
    const auto missing = std::count(loopless.t_star.begin(), loopless.t_star.end(), 0);
    LemmaCheck t{"precondition_t_star", true, static_cast<double>(missing), 0.0, static_cast<double>(missing), 0.0,
                 report.t_star_holds, "elements without a fully loopless time slot"};
    report.checks.push_back(t);
  }

  const std::string skip_note = "skipped: diagram does not satisfy the preconditions";
  const bool lemmas_apply = report.e1_gate_graph && report.t_star_holds;

  // Lemma 2: ground space of A(G^SL) is F_-, and 2 Pi_N (x) Pi_+ >= 2 kappa on F_+.
  double gamma_g = kInfinity;
  double gamma_sl = kInfinity;
  double c_measured = kInfinity;
  if (report.e1_gate_graph) {
    Eigen::Index fdim = 0;
    while (fdim < eig_g.eigenvalues().size() && eig_g.eigenvalues()[fdim] <= e + options.null_threshold) ++fdim;
    const Eigen::MatrixXd f = eig_g.eigenvectors().leftCols(fdim);
    const Eigen::MatrixXd f_minus = tensor_sign(f, -1.0);
    const Eigen::MatrixXd f_plus = tensor_sign(f, +1.0);

    LemmaCheck energy{"lemma2_ground_energy", true, mu_sl, e, std::abs(mu_sl - e), options.tol,
                      std::abs(mu_sl - e) <= options.tol, "mu(G^SL) = e"};
    report.checks.push_back(energy);

    double worst = 0.0;
    for (Eigen::Index col = 0; col < f_minus.cols(); ++col) {
      worst = std::max(worst, (a_sl * f_minus.col(col) - e * f_minus.col(col)).norm());
    }
    report.checks.push_back({"lemma2_minus_eigenstates", true, worst, 0.0, worst, options.tol, worst <= options.tol,
                             "|psi>|-> stays an eigenvector with eigenvalue e"});

    const Eigen::Index sl_dim = [&] {
      Eigen::Index n = 0;
      while (n < eig_sl.eigenvalues().size() && eig_sl.eigenvalues()[n] <= mu_sl + options.null_threshold) ++n;
      return n;
    }();
    const Eigen::MatrixXd ground_sl = eig_sl.eigenvectors().leftCols(sl_dim);
    const SpanComparison span = compare_spans<double>(ground_sl, f_minus);

    const Eigen::MatrixXd h_b = doubling_term(loopless);
    const Eigen::MatrixXd restricted = restrict<double>(h_b, f_plus, 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_r(restricted, Eigen::EigenvaluesOnly);
    c_measured = restricted.rows() ? eig_r.eigenvalues()[0] : kInfinity;
    const double c_bound = 2.0 * element.block_constant;

    gamma_g = gamma_of(Eigen::MatrixXd(a - e * Eigen::MatrixXd::Identity(a.rows(), a.cols())),
                       options.null_threshold)
                  .gamma;
    gamma_sl = gamma_of(Eigen::MatrixXd(a_sl - e * Eigen::MatrixXd::Identity(a_sl.rows(), a_sl.cols())),
                        options.null_threshold)
                   .gamma;

    if (lemmas_apply) {
      report.checks.push_back({"lemma2_ground_space", true, static_cast<double>(span.dim_a),
                               static_cast<double>(span.dim_b), span.max_sine, options.span_threshold,
                               span.match(options.span_threshold),
                               "principal angles between ground(A(G^SL)) and F_-"});
      report.checks.push_back({"lemma2_fplus_bound", true, c_measured, c_bound, c_measured - c_bound, c_bound,
                               c_measured >= c_bound - options.tol,
                               "min eigenvalue of (2 Pi_N (x) Pi_+) on F_+ vs 2 x element block constant"});
      if (std::isfinite(gamma_g)) {
        const double npl = npl_lower(c_bound, gamma_g, 2.0);
        report.checks.push_back({"lemma3_npl_chain", true, gamma_sl, npl, gamma_sl - npl, npl,
                                 gamma_sl >= npl - options.tol,
                                 "gamma(A(G^SL)-e) >= c gamma(A(G)-e) / (gamma(A(G)-e) + 2)"});
        const double norm_g = std::max(std::abs(mu_g), std::abs(eig_g.eigenvalues()[eig_g.eigenvalues().size() - 1]));
        const double weak = c_bound * gamma_g / (norm_g + std::abs(e) + 2.0);
        report.checks.push_back({"lemma3_norm_chain", true, gamma_sl, weak, gamma_sl - weak, weak,
                                 gamma_sl >= weak - options.tol,
                                 "gamma(A(G^SL)-e) >= c gamma(A(G)-e) / (||A(G)|| + |e| + 2)"});
        const ConformanceReport conf = validate_element(element, options.tol);
        report.checks.push_back({"lemma3_norm_bound", true, norm_g, conf.norm + 3.0, norm_g - conf.norm - 3.0,
                                 conf.norm + 3.0, norm_g <= conf.norm + 3.0 + options.tol,
                                 "||A(G)|| <= ||A(element)|| + 3"});
      } else {
        report.checks.push_back(skipped("lemma3_npl_chain", "A(G) - e has no nonzero eigenvalue"));
      }
    } else {
      report.checks.push_back(skipped("lemma2_ground_space", skip_note));
      report.checks.push_back(skipped("lemma2_fplus_bound", skip_note));
      report.checks.push_back(skipped("lemma3_npl_chain", skip_note));
    }
  } else {
    for (const char* name : {"lemma2_ground_energy", "lemma2_minus_eigenstates", "lemma2_ground_space",
                             "lemma2_fplus_bound", "lemma3_npl_chain"}) {
      report.checks.push_back(skipped(name, skip_note));
    }
  }

  // Lemma 4 holds for any graph.
  {
    const double r4 = lemma4_residual(static_cast<int>(g.num_vertices()), particles, options.lemma4_pairs,
                                      options.seed);
    report.checks.push_back({"lemma4_identity", true, r4, 0.0, r4, 1e-10, r4 <= 1e-10,
                             "<phi_bar|D'|psi_bar> = 1/2 <phi|D|psi> on random pairs"});
  }

  const Lambda1Result lam_g = lambda1_detail(g, particles, options.eigen_tol);
  const Lambda1Result lam_sl = lambda1_detail(sl.result, particles, options.eigen_tol);
  const Lambda1Result lam_nsl = lambda1_detail(nsl, particles, options.eigen_tol);

  if (report.e1_gate_graph) {
    report.checks.push_back({"lemma5_sl_c", true, lam_sl.lambda1, 1.5 * lam_g.lambda1,
                             lam_sl.lambda1 - 1.5 * lam_g.lambda1, 1.5 * lam_g.lambda1,
                             lam_sl.lambda1 <= 1.5 * lam_g.lambda1 + options.tol,
                             "lambda_N(G^SL) <= 3/2 lambda_N(G)"});
  } else {
    report.checks.push_back(skipped("lemma5_sl_c", skip_note));
  }
  {
    const double diff = std::abs(lam_nsl.lambda1 - lam_sl.lambda1);
    report.checks.push_back({"equal_nsl", true, lam_nsl.lambda1, lam_sl.lambda1, diff, options.equal_nsl_tol,
                             diff <= options.equal_nsl_tol, "lambda_N(G^NSL) = lambda_N(G^SL)"});
  }
  {
    LemmaCheck info = skipped("lemma5_gap_scaling", "gamma(A(G)-e) R^3; threshold C0 left to the caller");
    info.lhs = std::isfinite(gamma_g) ? gamma_g * std::pow(d.num_elements, 3) : 0.0;
    info.rhs = c_measured;
    report.checks.push_back(info);
  }
  return report;
}

nlohmann::json to_json(const LemmaCheck& c) {
  const auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); };
  return {{"name", c.name},         {"checked", c.checked},  {"lhs", num(c.lhs)},     {"rhs", num(c.rhs)},
          {"residual", num(c.residual)}, {"asserted_bound", num(c.asserted_bound)}, {"pass", c.pass},
          {"note", c.note}};
}

nlohmann::json to_json(const Section4Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", "section4"},
          {"element", r.element_source},
          {"R", r.num_elements},
          {"N", r.particles},
          {"K", r.num_vertices},
          {"e1_gate_graph", r.e1_gate_graph},
          {"t_star_holds", r.t_star_holds},
          {"tolerances",
           {{"tol", r.options.tol},
            {"eigen_tol", r.options.eigen_tol},
            {"null_threshold", r.options.null_threshold},
            {"span_threshold", r.options.span_threshold},
            {"equal_nsl_tol", r.options.equal_nsl_tol}}},
          {"seed", r.options.seed},
          {"checks", checks},
          {"pass", r.pass()}};
}

}  // namespace bhxy
