#include "bhxy/basis.hpp"

#include "bhxy/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

namespace bhxy {

BinomialTable::BinomialTable(int n_max)
    : n_max_(n_max), table_(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(n_max + 1), 0) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto at = [this](int n, int k) -> std::uint64_t& {
    return table_[static_cast<std::size_t>(n) * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(k)];
  };
  for (int n = 0; n <= n_max; ++n) {
    at(n, 0) = 1;
    for (int k = 1; k <= n; ++k) {
      const std::uint64_t a = at(n - 1, k - 1);
      const std::uint64_t b = k <= n - 1 ? at(n - 1, k) : 0;
      at(n, k) = (a > kMax - b) ? kMax : a + b;
    }
  }
}

std::uint64_t BinomialTable::operator()(int n, int k) const {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > n_max_) throw Error(ErrorKind::InternalInvariant, "binomial table too small");
  return table_[static_cast<std::size_t>(n) * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(k)];
}

// ---------------------------------------------------------------------------

HammingBasis::HammingBasis(int num_sites, int weight, std::uint64_t budget)
    : num_sites_(num_sites), weight_(weight), size_(0), binom_(std::max(num_sites, 1)) {
  if (num_sites < 1 || weight < 0 || weight > num_sites) {
    throw Error(ErrorKind::BadWeight, "weight " + std::to_string(weight) + " on " + std::to_string(num_sites) +
                                          " sites");
  }
  const std::uint64_t count = binom_(num_sites, weight);
  if (count > budget) {
    throw Error(ErrorKind::BudgetExceeded, "Hamming sector C(" + std::to_string(num_sites) + "," +
                                               std::to_string(weight) + ") exceeds budget");
  }
  size_ = static_cast<Eigen::Index>(count);
  positions_.resize(static_cast<std::size_t>(size_) * static_cast<std::size_t>(weight));

  // Colex successor enumerates in increasing integer order.
  std::vector<int> p(static_cast<std::size_t>(weight));
  std::iota(p.begin(), p.end(), 0);
  for (Eigen::Index idx = 0; idx < size_; ++idx) {
    std::copy(p.begin(), p.end(), positions_.begin() + idx * weight);
    int i = 0;
    while (i < weight && p[i] + 1 == (i + 1 < weight ? p[i + 1] : num_sites)) ++i;
    if (i == weight) break;
    ++p[i];
    for (int k = 0; k < i; ++k) p[k] = k;
  }
}

Eigen::Index HammingBasis::rank(std::span<const int> sorted_positions) const {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted_positions.size(); ++i) {
    r += binom_(sorted_positions[i], static_cast<int>(i) + 1);
  }
  return static_cast<Eigen::Index>(r);
}

std::vector<int> HammingBasis::unrank(Eigen::Index index) const {
  std::vector<int> p(static_cast<std::size_t>(weight_));
  auto remaining = static_cast<std::uint64_t>(index);
  int top = num_sites_ - 1;
  for (int i = weight_ - 1; i >= 0; --i) {
    while (binom_(top, i + 1) > remaining) --top;
    p[static_cast<std::size_t>(i)] = top;
    remaining -= binom_(top, i + 1);
    --top;
  }
  return p;
}

bool HammingBasis::occupied(Eigen::Index index, int site) const {
  const auto p = positions(index);
  return std::binary_search(p.begin(), p.end(), site);
}

// ---------------------------------------------------------------------------

BosonBasis::BosonBasis(int num_sites, int particles, std::uint64_t budget)
    : num_sites_(num_sites), particles_(particles), size_(0), binom_(std::max(num_sites + particles, 1)) {
  if (num_sites < 1 || particles < 0 || particles > std::numeric_limits<Occupation>::max()) {
    throw Error(ErrorKind::BadWeight, std::to_string(particles) + " particles on " + std::to_string(num_sites) +
                                          " sites");
  }
  const std::uint64_t count = binom_(num_sites + particles - 1, particles);
  if (count > budget || count * static_cast<std::uint64_t>(num_sites) > 64 * budget) {
    throw Error(ErrorKind::BudgetExceeded, "boson sector C(" + std::to_string(num_sites + particles - 1) + "," +
                                               std::to_string(particles) + ") exceeds budget");
  }
  size_ = static_cast<Eigen::Index>(count);
  occupations_.assign(static_cast<std::size_t>(size_) * static_cast<std::size_t>(num_sites), 0);

  std::vector<Occupation> n(static_cast<std::size_t>(num_sites), 0);
  n[0] = static_cast<Occupation>(particles);
  for (Eigen::Index idx = 0; idx < size_; ++idx) {
    std::copy(n.begin(), n.end(), occupations_.begin() + idx * num_sites);
    // Rightmost k <= K-2 with n_k > 0: move one particle right and gather the tail behind it.
    int k = num_sites - 2;
    while (k >= 0 && n[static_cast<std::size_t>(k)] == 0) --k;
    if (k < 0) break;
    int tail = 0;
    for (int m = k + 1; m < num_sites; ++m) {
      tail += n[static_cast<std::size_t>(m)];
      n[static_cast<std::size_t>(m)] = 0;
    }
    --n[static_cast<std::size_t>(k)];
    n[static_cast<std::size_t>(k + 1)] = static_cast<Occupation>(tail + 1);
  }
}

Eigen::Index BosonBasis::rank(std::span<const Occupation> occupation) const {
  // Count the vectors that are lexicographically greater.
  std::uint64_t r = 0;
  int remaining = particles_;
  for (int k = 0; k + 1 < num_sites_; ++k) {
    const int nk = occupation[static_cast<std::size_t>(k)];
    const int tail_sites = num_sites_ - k - 1;
    if (remaining > nk) r += binom_(remaining - nk - 1 + tail_sites, tail_sites);
    remaining -= nk;
  }
  return static_cast<Eigen::Index>(r);
}

std::vector<Occupation> BosonBasis::unrank(Eigen::Index index) const {
  std::vector<Occupation> n(static_cast<std::size_t>(num_sites_), 0);
  auto r = static_cast<std::uint64_t>(index);
  int remaining = particles_;
  for (int k = 0; k + 1 < num_sites_; ++k) {
    const int tail_sites = num_sites_ - k - 1;
    // Values of n_k appear in decreasing order; each block holds the tail distributions.
    int v = remaining;
    for (; v > 0; --v) {
      const std::uint64_t block = binom_(remaining - v + tail_sites - 1, tail_sites - 1);
      if (r < block) break;
      r -= block;
    }
    n[static_cast<std::size_t>(k)] = static_cast<Occupation>(v);
    remaining -= v;
  }
  n[static_cast<std::size_t>(num_sites_ - 1)] = static_cast<Occupation>(remaining);
  return n;
}

std::string basis_manifest(const HammingBasis& basis) {
  nlohmann::json doc;
  doc["kind"] = "hamming";
  doc["K"] = basis.num_sites();
  doc["N"] = basis.weight();
  doc["ordering"] = "increasing integer value, vertex v = bit v";
  doc["count"] = basis.size();
  return doc.dump();
}

std::string basis_manifest(const BosonBasis& basis) {
  nlohmann::json doc;
  doc["kind"] = "boson";
  doc["K"] = basis.num_sites();
  doc["N"] = basis.particles();
  doc["ordering"] = "decreasing lexicographic occupation vectors";
  doc["count"] = basis.size();
  return doc.dump();
}

}  // namespace bhxy
