#include "bhxy/reductions.hpp"
#include "bhxy/sector.hpp"
#include "bhxy/transforms.hpp"

#include "oracles.hpp"
#include "test_helpers.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace bhxy;

namespace {

const ElementGraph& mini() {
  static const ElementGraph e = mini_double_element();
  return e;
}

GateDiagram mini_diagram(int r, std::vector<Node> loops, std::vector<NodeEdge> edges = {}) {
  return new_diagram(r, std::vector<UnitaryLabel>(static_cast<std::size_t>(r), UnitaryLabel::Identity),
                     std::move(loops), std::move(edges), mini().node_rule);
}

/// C_4 plus a disjoint path P_m.
Graph cycle_plus_path(int m) {
  const int k = 4 + m;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < 4; ++i) a(i, (i + 1) % 4) = a((i + 1) % 4, i) = 1;
  for (int i = 4; i + 1 < k; ++i) a(i, i + 1) = a(i + 1, i) = 1;
  return new_graph(a);
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "bhxy_test_reductions";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("instance validation") {
  const Graph g = new_graph(Eigen::MatrixXd::Zero(4, 4));
  CHECK_NOTHROW(validate(FFBHInstance{g, 2, 16, 3}));
  CHECK_ERROR_KIND(validate(FFBHInstance{g, 2, 15, 3}), ErrorKind::InvalidInstance);
  CHECK_ERROR_KIND(validate(FFBHInstance{g, 5, 16, 3}), ErrorKind::InvalidInstance);
  CHECK_ERROR_KIND(validate(FFBHInstance{g, 2, 16, 0}), ErrorKind::InvalidInstance);
  CHECK_ERROR_KIND(validate(XYInstance{g, 2, 0.0, 0}), ErrorKind::InvalidInstance);
  CHECK(epsilon_of(BigInt(8)) == 0.125);
}

TEST_CASE("classify_ffbh examples") {
  const Verdict empty = classify_ffbh(FFBHInstance{new_graph(Eigen::MatrixXd::Zero(4, 4)), 2, 16, 3});
  CHECK(empty.classification == Classification::Yes);
  CHECK(std::abs(empty.measured) < 1e-10);

  const Verdict p2 = classify_ffbh(FFBHInstance{path2(), 2, 8, 3});
  CHECK(p2.classification == Classification::No);
  CHECK(p2.measured == doctest::Approx(3.0 - std::sqrt(5.0)));
  CHECK(p2.high == doctest::Approx(0.125 + std::pow(0.125, 3)));
  CHECK(to_json(p2)["classification"] == "no");

  // one boson on C_4 (energy -2) and one on P_60 (-2 cos(pi/61)); independent components
  const Graph g = cycle_plus_path(60);
  const double expected = 2.0 - 2.0 * std::cos(std::numbers::pi / 61.0);
  const double lam = lambda1(g, 2);
  CHECK(lam == doctest::Approx(expected).epsilon(1e-8));
  const Verdict gap = classify_ffbh(FFBHInstance{g, 2, 4 * 64, 3});
  CHECK(gap.low < lam);
  CHECK(lam < gap.high);
  CHECK(gap.classification == Classification::Undetermined);
}

TEST_CASE("classify_xy examples") {
  CHECK(classify_xy(XYInstance{path2(), 1, -1.0, 4}).classification == Classification::Yes);
  CHECK(classify_xy(XYInstance{path2(), 1, -2.0, 2}).classification == Classification::No);
  CHECK(classify_xy(XYInstance{path2(), 1, -1.05, 10}).classification == Classification::Undetermined);
}

TEST_CASE("verdicts are monotone in tol") {
  const double tols[] = {0.0, 1e-12, 1e-6, 1e-3, 0.1, 1.0};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double low = u(rng);
    const double high = low + std::abs(u(rng));
    const double x = u(rng);
    Classification prev = make_verdict(x, low, high, 0.0).classification;
    for (double tol : tols) {
      const Classification c = make_verdict(x, low, high, tol).classification;
      if (prev != Classification::Undetermined && c != Classification::Undetermined) CHECK(c == prev);
      if (c != Classification::Undetermined) prev = c;
    }
  }
}

TEST_CASE("reduce_bh_to_xy") {
  const Graph k3 = complete(3);
  // any alpha = 3 instance: T' = 4T, c = N mu + 1/(4T)
  const XYInstance out = reduce_bh_to_xy(FFBHInstance{k3, 2, 16, 3});
  CHECK(out.t == 64);
  CHECK(out.c == doctest::Approx(2 * -1.0 + 1.0 / 64));
  CHECK(out.provenance["mu_tolerance"] == 1e-10);
  CHECK(out.provenance["mu"].get<double>() == doctest::Approx(-1.0));

  CHECK(reduce_bh_to_xy(FFBHInstance{new_graph(Eigen::MatrixXd::Zero(2, 2)), 1, 8, 3}).c ==
        doctest::Approx(1.0 / 32));
  CHECK(reduce_bh_to_xy(FFBHInstance{path2(), 1, 8, 3}).c == doctest::Approx(-1.0 + 1.0 / 32));
  CHECK_ERROR_KIND(reduce_bh_to_xy(FFBHInstance{path2(), 1, 8, 2}), ErrorKind::AlphaMismatch);
}

TEST_CASE("reduction consistency between theta and lambda") {
  std::mt19937_64 rng(19);
  int hardcore = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 6;
    const Graph g = new_graph(oracle::random_adjacency(k, 0.5, 0.3, rng));
    for (int n = 1; n <= std::min(3, k); ++n) {
      const Lambda1Result r = lambda1_detail(g, n);
      const double th = theta(g, n);
      CHECK(th >= r.lambda1 + n * r.mu - 2e-10);
      const BosonBasis basis(k, n);
      const double interaction = interaction_diagonal(basis).dot(r.ground_state.cwiseAbs2());
      if (interaction <= 1e-10) {
        ++hardcore;
        CHECK(th == doctest::Approx(r.lambda1 + n * r.mu).epsilon(1e-9));
      }
    }
  }
  CHECK(hardcore > 10);
}

TEST_CASE("reduce_to_simple") {
  const GateDiagram d = mini_diagram(1, {});
  const FFBHInstance out = reduce_to_simple(d, mini(), 1, 40);
  CHECK(out.graph.num_vertices() == 16);
  CHECK(is_simple(out.graph));
  CHECK(out.t == boost::multiprecision::pow(BigInt(40), 7));
  CHECK(out.provenance["K_prime"] == 16);
  CHECK(out.provenance["T_prime_ge_4K_prime"] == true);
  CHECK(out.provenance.contains("epsilon_ceiling"));
  CHECK_NOTHROW(validate(out));

  const GateDiagram bad = mini_diagram(1, {Node{1, 0, 1}, Node{1, 0, 2}, Node{1, 1, 1}, Node{1, 1, 2}});
  CHECK_ERROR_KIND(reduce_to_simple(bad, mini(), 1, 40), ErrorKind::NotE1GateGraph);
  CHECK_ERROR_KIND(reduce_to_simple(d, mini(), 1, 31), ErrorKind::InvalidInstance);
}

TEST_CASE("reduce_to_simple preserves yes instances") {
  const std::vector<GateDiagram> diagrams = {
      mini_diagram(1, {}),
      mini_diagram(2, {}, {{Node{1, 0, 1}, Node{2, 0, 1}}}),
      mini_diagram(2, {Node{1, 0, 1}}),
  };
  for (const auto& d : diagrams) {
    for (int n = 1; n <= 2; ++n) {
      const Graph g = compile(d, mini());
      const BigInt t = 4 * g.num_vertices();
      const double lam = lambda1(g, n);
      if (lam > 1e-9) continue;
      const FFBHInstance out = reduce_to_simple(d, mini(), n, t);
      CHECK(lambda1(out.graph, n) <= 1.5 * lam + 1e-9);
      CHECK(classify_ffbh(FFBHInstance{g, n, t, 8}).classification == Classification::Yes);
      // the promise gap T'^-7 is far below the default tolerance
      CHECK(classify_ffbh(out).classification == Classification::Undetermined);
      const double eps = epsilon_of(out.t);
      CHECK(classify_ffbh(out, eps / 100).classification == Classification::Yes);
    }
  }
}

TEST_CASE("instance files") {
  const auto dir = scratch();
  const FFBHInstance inst{complete(3), 2, 12, 3, {{"note", "k3"}}};
  write_instance_file(dir / "k3.json", inst);
  const InstanceFile back = read_instance_file(dir / "k3.json");
  REQUIRE(back.ffbh);
  CHECK(back.kind == "ffbh");
  CHECK(back.ffbh->graph == inst.graph);
  CHECK(back.ffbh->t == 12);
  CHECK(back.ffbh->provenance["note"] == "k3");

  const XYInstance xy = reduce_bh_to_xy(inst);
  write_instance_file(dir / "k3_xy.json", xy);
  const InstanceFile xb = read_instance_file(dir / "k3_xy.json");
  REQUIRE(xb.xy);
  CHECK(xb.xy->c == xy.c);
  CHECK(xb.xy->t == 48);

  // T beyond 64 bits survives the round trip
  const FFBHInstance big{complete(3), 1, boost::multiprecision::pow(BigInt(1000), 7), 1};
  write_instance_file(dir / "big.json", big);
  CHECK(read_instance_file(dir / "big.json").ffbh->t == big.t);

  std::ofstream(dir / "bad.json") << R"({"kind":"ffbh","graph":"k3.mtx","N":2,"T":"12x","alpha":3})";
  CHECK_ERROR_KIND(read_instance_file(dir / "bad.json"), ErrorKind::ParseError);
  std::ofstream(dir / "small.json") << R"({"kind":"ffbh","graph":"k3.mtx","N":2,"T":"11","alpha":3})";
  CHECK_ERROR_KIND(read_instance_file(dir / "small.json"), ErrorKind::InvalidInstance);

  std::ofstream(dir / "d.json") << R"({"R":1,"labels":["1"],"self_loops":[],"edges":[]})";
  std::ofstream(dir / "diag.json") << R"({"kind":"ffbh","diagram":"d.json","element":"mini","N":1,"T":"32","alpha":8})";
  const InstanceFile df = read_instance_file(dir / "diag.json");
  REQUIRE(df.diagram);
  CHECK(df.ffbh->graph.num_vertices() == 8);
  std::filesystem::remove_all(dir);
}
