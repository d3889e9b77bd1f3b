#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bhxy {

/// Largest sector the library will enumerate.
inline constexpr std::uint64_t kDefaultBasisBudget = 4'000'000;

/// Pascal's triangle up to row n_max; entries saturate at UINT64_MAX.
class BinomialTable {
 public:
  explicit BinomialTable(int n_max);
  std::uint64_t operator()(int n, int k) const;
  int n_max() const { return n_max_; }

 private:
  int n_max_;
  std::vector<std::uint64_t> table_;
};

/// Weight-N bit strings on K sites. Vertex v is bit v; states are ordered by
/// increasing integer value (lexicographic order of b_{K-1} ... b_0), so the
/// rank of a sorted position list p_0 < ... < p_{N-1} is sum_i C(p_i, i+1).
class HammingBasis {
 public:
  HammingBasis(int num_sites, int weight, std::uint64_t budget = kDefaultBasisBudget);

  int num_sites() const { return num_sites_; }
  int weight() const { return weight_; }
  Eigen::Index size() const { return size_; }

  /// Occupied sites of state `index`, ascending.
  std::span<const int> positions(Eigen::Index index) const {
    return {positions_.data() + index * weight_, static_cast<std::size_t>(weight_)};
  }
  Eigen::Index rank(std::span<const int> sorted_positions) const;
  std::vector<int> unrank(Eigen::Index index) const;
  bool occupied(Eigen::Index index, int site) const;

 private:
  int num_sites_;
  int weight_;
  Eigen::Index size_;
  BinomialTable binom_;
  std::vector<int> positions_;
};

using Occupation = std::uint16_t;

/// Occupation vectors (n_0, ..., n_{K-1}) with sum N, in decreasing
/// lexicographic order: (N,0,...,0) first, (0,...,0,N) last.
class BosonBasis {
 public:
  BosonBasis(int num_sites, int particles, std::uint64_t budget = kDefaultBasisBudget);

  int num_sites() const { return num_sites_; }
  int particles() const { return particles_; }
  Eigen::Index size() const { return size_; }

  std::span<const Occupation> occupation(Eigen::Index index) const {
    return {occupations_.data() + index * num_sites_, static_cast<std::size_t>(num_sites_)};
  }
  Eigen::Index rank(std::span<const Occupation> occupation) const;
  std::vector<Occupation> unrank(Eigen::Index index) const;

 private:
  int num_sites_;
  int particles_;
  Eigen::Index size_;
  BinomialTable binom_;
  std::vector<Occupation> occupations_;
};

/// {"kind", "K", "N", "ordering", "count"} as a JSON string.
std::string basis_manifest(const HammingBasis& basis);
std::string basis_manifest(const BosonBasis& basis);

}  // namespace bhxy
