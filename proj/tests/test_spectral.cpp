#include "bhxy/spectral.hpp"
#include "bhxy/suites.hpp"

#include "oracles.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace bhxy;

namespace {

Eigen::MatrixXd diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
}

}  // namespace

TEST_CASE("gamma_of examples") {
  const GapResult r = gamma_of(diag({0, 0, 3}), 1e-10);
  CHECK(r.null_dim == 2);
  CHECK(r.gamma == doctest::Approx(3.0));
  const GapResult t = gamma_of(diag({1e-14, 2}), 1e-10);
  CHECK(t.null_dim == 1);
  CHECK(t.gamma == doctest::Approx(2.0));
  CHECK(gamma_of(diag({0, 0}), 1e-10).gamma == kInfinity);
  CHECK_ERROR_KIND(gamma_of(diag({-1, 2}), 1e-10), ErrorKind::NotPSD);
}

TEST_CASE("gamma_of sparse path agrees with dense") {
  std::mt19937_64 rng(5);
  // diagonal with a 3-dim nullspace plus a random sparse PSD coupling, dim 700
  const Eigen::Index n = 700;
  std::vector<Triplet> t;
  for (Eigen::Index i = 3; i < n; ++i) t.emplace_back(i, i, 1.0 + 0.01 * static_cast<double>(i % 17));
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  const GapResult sparse = gamma_of(m, 1e-8);
  const GapResult dense = gamma_of(Eigen::MatrixXd(m), 1e-8);
  CHECK(sparse.null_dim == 3);
  CHECK(sparse.gamma == doctest::Approx(dense.gamma).epsilon(1e-8));
}

TEST_CASE("gamma_of is rotation invariant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index dim = 2 + trial % 19;
    const Eigen::MatrixXd m = random_psd(dim, 1 + trial % dim, rng());
    const Eigen::MatrixXd q = random_orthogonal(dim, rng);
    const double thr = default_null_threshold(m);
    const GapResult a = gamma_of(m, thr);
    const GapResult b = gamma_of(Eigen::MatrixXd(q * m * q.transpose()), thr);
    CHECK(a.null_dim == b.null_dim);
    if (std::isfinite(a.gamma)) CHECK(a.gamma == doctest::Approx(b.gamma).epsilon(1e-8));
  }
}

TEST_CASE("nullspace_basis and restrict") {
  const Eigen::MatrixXd n = nullspace_basis(diag({0, 1}), 1e-10);
  REQUIRE(n.cols() == 1);
  CHECK(std::abs(std::abs(n(0, 0)) - 1.0) < 1e-14);
  CHECK(nullspace_basis(diag({1, 2}), 1e-10).cols() == 0);

  const Eigen::MatrixXd op = diag({1, 2, 3});
  CHECK(restrict<double>(op, Eigen::MatrixXd::Identity(3, 3)) == op);
  CHECK(restrict<double>(op, Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 2))) == diag({1, 2}));
  Eigen::MatrixXd skew = Eigen::MatrixXd::Identity(3, 2);
  skew(2, 0) = 0.5;
  CHECK_ERROR_KIND(restrict<double>(op, skew), ErrorKind::NotOrthonormal);
  CHECK_ERROR_KIND(restrict<double>(op, Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2))), ErrorKind::DimensionMismatch);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd p = random_psd(12, 5, rng());
    const Eigen::MatrixXd basis = random_orthogonal(12, rng).leftCols(4);
    const Eigen::MatrixXd r = restrict<double>(p, basis);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r).eigenvalues()[0] >= -1e-10);
  }
}

TEST_CASE("compare_spans") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd q = random_orthogonal(6, rng);
  const Eigen::MatrixXd a = q.leftCols(3);
  const Eigen::MatrixXd rot = random_orthogonal(3, rng);
  CHECK(compare_spans<double>(a, Eigen::MatrixXd(a * rot)).match(1e-12));
  CHECK(!compare_spans<double>(a, Eigen::MatrixXd(q.rightCols(3))).match(1e-8));
  CHECK(compare_spans<double>(a, Eigen::MatrixXd(q.rightCols(3))).max_sine == doctest::Approx(1.0));
  CHECK(!compare_spans<double>(a, Eigen::MatrixXd(q.leftCols(2))).match(1e-8));
}

TEST_CASE("variational_upper and npl_lower examples") {
  CHECK(variational_upper(diag({0, 4}), diag({1, 0}), 1e-10) == doctest::Approx(1.0));
  CHECK(oracle::dense_gamma(diag({1, 4}), 1e-10) == doctest::Approx(1.0));
  CHECK(variational_upper(diag({0, 0}), diag({2, 3}), 1e-10) == doctest::Approx(2.0));
  CHECK_ERROR_KIND(variational_upper(diag({1, 4}), diag({1, 0}), 1e-10), ErrorKind::EmptyNullspace);
  CHECK_ERROR_KIND(variational_upper(diag({0, 4}), diag({-1, 0}), 1e-10), ErrorKind::NotPSD);

  CHECK(npl_lower(1, 4, 1) == doctest::Approx(0.8));
  CHECK(npl_lower(1, 1e12, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(npl_lower(1, kInfinity, 1) == 1.0);
  CHECK(npl_lower(0.7, 3, 0) == doctest::Approx(0.7));
  CHECK_ERROR_KIND(npl_lower(0, 1, 1), ErrorKind::NonPositiveInput);
  CHECK_ERROR_KIND(npl_lower(1, 0, 1), ErrorKind::NonPositiveInput);
  CHECK_ERROR_KIND(npl_lower(1, 1, -1), ErrorKind::NonPositiveInput);
}

TEST_CASE("certify on the 2x2 example") {
  const GapCertificate c = certify(diag({0, 4}), diag({1, 0}));
  CHECK(c.rule == "npl");
  CHECK(c.c == doctest::Approx(1.0));
  CHECK(c.d == doctest::Approx(4.0));
  CHECK(c.norm_b == doctest::Approx(1.0));
  CHECK(c.lower_bound == doctest::Approx(0.8));
  REQUIRE(c.upper_bound);
  CHECK(*c.upper_bound == doctest::Approx(1.0));
  REQUIRE(c.measured_gamma);
  CHECK(*c.measured_gamma == doctest::Approx(1.0));
  CHECK(c.consistent(1e-9));
  const auto doc = to_json(c);
  CHECK(doc["lower_bound"].get<double>() == doctest::Approx(0.8));
}

TEST_CASE("certificates bracket the dense gamma on random PSD pairs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<Eigen::Index> pick(3, 40);
    const Eigen::Index dim = pick(rng);
    const Eigen::MatrixXd a = random_psd(dim, std::uniform_int_distribution<Eigen::Index>(1, dim - 1)(rng), rng());
    const Eigen::MatrixXd b = random_psd(dim, std::uniform_int_distribution<Eigen::Index>(1, dim)(rng), rng());
    const GapCertificate c = certify(a, b);
    const double gamma = oracle::dense_gamma(a + b, default_null_threshold(Eigen::MatrixXd(a + b)));
    CHECK(c.lower_bound <= gamma + 1e-9);
    REQUIRE(c.upper_bound);
    CHECK(gamma <= *c.upper_bound + 1e-9);
  }
}

TEST_CASE("certify_chain") {
  // H_B = 0: lower bound equals d
  const Eigen::MatrixXd base = diag({0, 2, 5});
  const CertificateChain trivial = certify_chain(base, {ChainStep{"zero", Eigen::MatrixXd::Zero(3, 3), {}}}, 1e-10);
  REQUIRE(trivial.steps.size() == 1);
  CHECK(trivial.final_lower_bound == doctest::Approx(2.0));
  CHECK(trivial.steps[0].rule == "monotone");

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index dim = 6 + trial % 10;
    const Eigen::MatrixXd h0 = random_psd(dim, dim - 3, rng());
    const Eigen::MatrixXd h1 = random_psd(dim, 2, rng());
    const Eigen::MatrixXd h2 = random_psd(dim, 2, rng());
    const CertificateChain chain = certify_chain(h0, {{"h1", h1, {}}, {"h2", h2, {}}}, 1e-8);
    const double gamma = oracle::dense_gamma(h0 + h1 + h2, 1e-8 * std::max(1.0, (h0 + h1 + h2).cwiseAbs().colwise().sum().maxCoeff()));
    CHECK(chain.final_lower_bound <= gamma + 1e-9);
    REQUIRE(chain.final_measured_gamma);
    CHECK(*chain.final_measured_gamma == doctest::Approx(gamma).epsilon(1e-8));
  }
}

TEST_CASE("certificate suite is deterministic") {
  const CertificateSuite a = certificate_suite(50, 7);
  const CertificateSuite b = certificate_suite(50, 7);
  CHECK(a.pass());
  CHECK(to_json(a).dump() == to_json(b).dump());
}
