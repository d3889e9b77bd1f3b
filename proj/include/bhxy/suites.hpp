#pragma once

#include "bhxy/graph.hpp"
#include "bhxy/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace bhxy {

struct CertificateTrial {
  Eigen::Index dim = 0;
  GapCertificate certificate;
  double gamma = kInfinity;  // gamma(H_A + H_B), dense
  double upper_slack = 0.0;  // upper - gamma
  double lower_slack = 0.0;  // gamma - lower
  bool pass = false;
};

struct CertificateSuite {
  std::uint64_t seed = 0;
  double slack = 1e-9;
  std::vector<CertificateTrial> trials;
  bool pass() const;
};

/// Random PSD pairs with a nontrivial null(H_A): dims in [4, max_dim], checks
/// lower <= gamma(H_A + H_B) <= upper within `slack`.
CertificateSuite certificate_suite(int trials, std::uint64_t seed, Eigen::Index max_dim = 40, double slack = 1e-9);

struct HardcoreCase {
  int n = 0;
  Eigen::Index dim = 0;
  double max_abs_diff = 0.0;
  bool pass = false;
};

/// Entrywise comparison of the hard-core restricted Bose-Hubbard operator
/// with the XY sector operator for every 1 <= n <= max_n (n <= K).
std::vector<HardcoreCase> hardcore_suite(const Graph& g, int max_n, double tol = 1e-12);

nlohmann::json to_json(const CertificateSuite& s);
nlohmann::json to_json(const std::vector<HardcoreCase>& cases, double tol);

}  // namespace bhxy
