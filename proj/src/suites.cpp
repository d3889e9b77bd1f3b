#include "bhxy/suites.hpp"

#include "bhxy/sector.hpp"

#include <algorithm>
#include <random>

namespace bhxy {

bool CertificateSuite::pass() const {
  return std::all_of(trials.begin(), trials.end(), [](const CertificateTrial& t) { return t.pass; });
}

CertificateSuite certificate_suite(int trials, std::uint64_t seed, Eigen::Index max_dim, double slack) {
  CertificateSuite suite;
  suite.seed = seed;
  suite.slack = slack;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < trials; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick_dim(4, max_dim);
    const Eigen::Index dim = pick_dim(rng);
    std::uniform_int_distribution<Eigen::Index> pick_a(1, dim - 1);
    std::uniform_int_distribution<Eigen::Index> pick_b(1, dim);
    const Eigen::Index rank_a = pick_a(rng);
    const Eigen::Index rank_b = pick_b(rng);
    const Eigen::MatrixXd h_a = random_psd(dim, rank_a, rng());
    const Eigen::MatrixXd h_b = random_psd(dim, rank_b, rng());

    CertificateTrial t;
    t.dim = dim;
    t.certificate = certify(h_a, h_b);
    t.gamma = *t.certificate.measured_gamma;
    t.lower_slack = t.gamma - t.certificate.lower_bound;
    t.upper_slack = t.certificate.upper_bound ? *t.certificate.upper_bound - t.gamma : kInfinity;
    t.pass = t.lower_slack >= -slack && t.upper_slack >= -slack;
    suite.trials.push_back(std::move(t));
  }
  return suite;
}

std::vector<HardcoreCase> hardcore_suite(const Graph& g, int max_n, double tol) {
  std::vector<HardcoreCase> cases;
  const int k = static_cast<int>(g.num_vertices());
  for (int n = 1; n <= std::min(max_n, k); ++n) {
    const SparseMatrix diff = hardcore_restriction(g, n).sparse() - xy_sector(g, n).sparse();
    HardcoreCase c;
    c.n = n;
    c.dim = diff.rows();
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(diff, r); it; ++it) c.max_abs_diff = std::max(c.max_abs_diff, std::abs(it.value()));
    }
    c.pass = c.max_abs_diff <= tol;
    cases.push_back(c);
  }
  return cases;
}

nlohmann::json to_json(const CertificateSuite& s) {
  nlohmann::json trials = nlohmann::json::array();
  double worst_lower = kInfinity;
  double worst_upper = kInfinity;
  for (const auto& t : s.trials) {
    worst_lower = std::min(worst_lower, t.lower_slack);
    worst_upper = std::min(worst_upper, t.upper_slack);
    nlohmann::json item = to_json(t.certificate);
    item["dim"] = t.dim;
    item["gamma"] = std::isfinite(t.gamma) ? nlohmann::json(t.gamma) : nlohmann::json();
    item["pass"] = t.pass;
    trials.push_back(std::move(item));
  }
  const auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); };
  return {{"suite", "certificates"},
          {"seed", s.seed},
          {"slack", s.slack},
          {"num_trials", s.trials.size()},
          {"min_lower_slack", num(worst_lower)},
          {"min_upper_slack", num(worst_upper)},
          {"trials", trials},
          {"pass", s.pass()}};
}

nlohmann::json to_json(const std::vector<HardcoreCase>& cases, double tol) {
  nlohmann::json items = nlohmann::json::array();
  bool pass = true;
  for (const auto& c : cases) {
    items.push_back({{"N", c.n}, {"dim", c.dim}, {"max_abs_diff", c.max_abs_diff}, {"pass", c.pass}});
    pass = pass && c.pass;
  }
  return {{"suite", "hardcore"}, {"tol", tol}, {"cases", items}, {"pass", pass}};
}

}  // namespace bhxy
