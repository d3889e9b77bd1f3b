#pragma once

#include "bhxy/basis.hpp"
#include "bhxy/diagram.hpp"
#include "bhxy/element.hpp"
#include "bhxy/error.hpp"
#include "bhxy/graph.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <vector>

namespace bhxy {

/// Vertices of a compiled gate graph whose node carries neither a diagram
/// self-loop nor a diagram edge.
struct LooplessSet {
  std::vector<bool> member;
  /// Per element q (index q-1): a time slot t* whose nodes (q,0,t*) and
  /// (q,1,t*) are both loopless, or 0 when none exists.
  std::vector<int> t_star;

  Eigen::Index size() const;
  bool contains(Eigen::Index v) const { return member[static_cast<std::size_t>(v)]; }
  bool t_star_holds() const;
  /// Diagonal of the projector onto the set.
  Eigen::VectorXd projector_diagonal() const;
};

LooplessSet loopless_set(const GateDiagram& d, const ElementGraph& element);

/// Base graph G, loopless set N, and G^SL on labels (..., d) with the doubling
/// register last: vertex (v, d) has index 2 v + d.
struct DoubledGraph {
  Graph base;
  LooplessSet loopless;
  Graph result;
};

/// A(G) (x) 1_d + 2 Pi_N (x) Pi_+. Throws InternalInvariant if the result
/// leaves 0-1 or misses a self-loop.
DoubledGraph build_SL(const Graph& base, const LooplessSet& loopless);
/// A(G^SL) - I.
Graph build_NSL(const DoubledGraph& sl);

/// 2 Pi_N (x) Pi_+ as a dense matrix on the doubled vertex set.
Eigen::MatrixXd doubling_term(const LooplessSet& loopless);

/// Maps an N-boson state on K sites to 2K sites by sending every particle
/// at v to (|v,0> - |v,1>)/sqrt(2). In occupation coordinates n_v particles
/// split as (n_v - k, k) with amplitude 2^{-n_v/2} (-1)^k sqrt(C(n_v, k)).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lift_state(const BosonBasis& from, const BosonBasis& to,
                                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& phi) {
  if (phi.size() != from.size() || to.num_sites() != 2 * from.num_sites() || to.particles() != from.particles()) {
    throw Error(ErrorKind::DimensionMismatch, "lift_state: bases do not match the doubled geometry");
  }
  if (std::abs(phi.norm() - 1.0) > 1e-8) {
    std::cerr << "warning: lift_state input is not normalized (norm " << phi.norm() << ")\n";
  }
  const int k = from.num_sites();
  const int n = from.particles();
  // split_weight[n_v][k] = 2^{-n_v/2} (-1)^k sqrt(C(n_v,k))
  std::vector<std::vector<double>> split_weight(static_cast<std::size_t>(n + 1));
  for (int nv = 0; nv <= n; ++nv) {
    double binom = 1.0;
    for (int s = 0; s <= nv; ++s) {
      split_weight[static_cast<std::size_t>(nv)].push_back(std::pow(2.0, -0.5 * nv) * ((s % 2) ? -1.0 : 1.0) *
                                                           std::sqrt(binom));
      binom = binom * (nv - s) / (s + 1);
    }
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(to.size());
  std::vector<Occupation> target(static_cast<std::size_t>(2 * k), 0);
  std::vector<int> occupied;
  for (Eigen::Index i = 0; i < from.size(); ++i) {
    if (phi[i] == Scalar(0)) continue;
    const auto occ = from.occupation(i);
    occupied.clear();
    std::fill(target.begin(), target.end(), 0);
    for (int v = 0; v < k; ++v) {
      if (occ[static_cast<std::size_t>(v)] > 0) {
        occupied.push_back(v);
        target[static_cast<std::size_t>(2 * v)] = occ[static_cast<std::size_t>(v)];
      }
    }
    // Odometer over the number k_v of particles moved to copy d = 1.
    std::vector<int> moved(occupied.size(), 0);
    while (true) {
      double weight = 1.0;
      for (std::size_t m = 0; m < occupied.size(); ++m) {
        const int nv = occ[static_cast<std::size_t>(occupied[m])];
        weight *= split_weight[static_cast<std::size_t>(nv)][static_cast<std::size_t>(moved[m])];
      }
      out[to.rank(target)] += phi[i] * weight;
      std::size_t m = 0;
      for (; m < occupied.size(); ++m) {
        const auto v = static_cast<std::size_t>(occupied[m]);
        if (moved[m] < occ[v]) {
          ++moved[m];
          --target[2 * v];
          ++target[2 * v + 1];
          break;
        }
        target[2 * v] = occ[v];
        target[2 * v + 1] = 0;
        moved[m] = 0;
      }
      if (m == occupied.size()) break;
    }
  }
  return out;
}

struct Section4Options {
  double tol = 1e-9;               // generic comparison slack
  double eigen_tol = 1e-10;        // Lanczos residual target
  double null_threshold = 1e-8;    // nullspace / ground-space window
  double span_threshold = 1e-8;    // principal-angle sine
  double equal_nsl_tol = 2e-10;
  int lemma4_pairs = 5;
  std::uint64_t seed = 1;
  Eigen::Index max_doubled_vertices = 2048;
};

/// One lemma check: checked=false means its precondition failed or it is
/// informational only.
struct LemmaCheck {
  std::string name;
  bool checked = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double asserted_bound = 0.0;
  bool pass = true;
  std::string note;
};

struct Section4Report {
  std::string element_source;
  int num_elements = 0;
  int particles = 0;
  Eigen::Index num_vertices = 0;
  bool e1_gate_graph = false;
  bool t_star_holds = false;
  std::vector<LemmaCheck> checks;
  Section4Options options;

  bool pass() const;
  const LemmaCheck& find(const std::string& name) const;
};

/// Numerically checks the doubling construction on a compiled diagram.
Section4Report verify_section4(const GateDiagram& d, const ElementGraph& element, int particles,
                               const Section4Options& options = {});

nlohmann::json to_json(const LemmaCheck& c);
nlohmann::json to_json(const Section4Report& r);

/// Largest |<lift phi| D' |lift psi> - 1/2 <phi| D |psi>| over `pairs` random
/// normalized complex state pairs, D the on-site interaction.
double lemma4_residual(int num_sites, int particles, int pairs, std::uint64_t seed);

}  // namespace bhxy
