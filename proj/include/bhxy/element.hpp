#pragma once

#include "bhxy/graph.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bhxy {

/// Smallest adjacency eigenvalue of the 128-vertex gate element, -1 - 3 sqrt(2).
inline const double kE1 = -1.0 - 3.0 * std::sqrt(2.0);

enum class UnitaryLabel { Identity, Hadamard, HadamardT };

std::string to_string(UnitaryLabel label);
/// "1", "H" or "HT"; throws ParseError otherwise.
UnitaryLabel parse_unitary_label(const std::string& text);

enum class ElementSource { Asset, MiniDouble };

std::string to_string(ElementSource source);

/// Vertex layout (z, t, j): z in {0,1}, t in [1, t_max], j in [0, j_max).
/// Flat index z * t_max * j_max + (t - 1) * j_max + j.
struct ElementGeometry {
  int t_max = 8;
  int j_max = 8;

  int num_vertices() const { return 2 * t_max * j_max; }
  Eigen::Index index(int z, int t, int j) const {
    return static_cast<Eigen::Index>(z) * t_max * j_max + static_cast<Eigen::Index>(t - 1) * j_max + j;
  }
  bool contains(int z, int t, int j) const { return (z == 0 || z == 1) && t >= 1 && t <= t_max && j >= 0 && j < j_max; }
  friend bool operator==(const ElementGeometry&, const ElementGeometry&) = default;
};

inline constexpr ElementGeometry kGateElementGeometry{8, 8};

/// Which time slots a diagram element exposes as nodes for each label.
class NodeRule {
 public:
  /// The three gate elements: 1 -> {1,3,5,7}, H -> {1,3,2,8}, HT -> {1,3,4,6}.
  static NodeRule gate_element();
  /// Every t in [1, t_max] for every label (substitute elements).
  static NodeRule all_times(int t_max);

  bool allows(UnitaryLabel label, int t) const;
  const std::vector<int>& times(UnitaryLabel label) const { return allowed_[static_cast<std::size_t>(label)]; }
  int t_max() const { return t_max_; }

 private:
  int t_max_ = 8;
  std::array<std::vector<int>, 3> allowed_;
};

/// A diagram building block with a declared ground energy and a declared
/// orthonormal ground basis |psi_{z,a}>; column 2z + a of `ground_basis`.
struct ElementGraph {
  Graph graph;
  ElementGeometry geometry;
  double ground_energy = 0.0;
  Eigen::MatrixXcd ground_basis;
  ElementSource source = ElementSource::MiniDouble;
  NodeRule node_rule;
  /// <psi_{x,b}| (1 (x) |t><t| (x) 1) |psi_{z,a}> = block_constant delta_{zx} delta_{ab}.
  double block_constant = 0.0;
};

/// psi_{z,0} built from |z>, H|z>, HT|z> on the time slots, tensored with
/// the phase state |omega>; psi_{z,1} is its complex conjugate.
/// Throws GeometryMismatch unless geometry is 8 x 8.
Eigen::VectorXcd psi_state(int z, int a, const ElementGeometry& geometry = kGateElementGeometry);

/// Reads the 128-vertex element from an .mtx file and its (z,t,j) label
/// sidecar, permuting vertices into the canonical order.
ElementGraph load_element(const std::filesystem::path& mtx_path);
/// Same, from an already labelled graph.
ElementGraph load_element(const Graph& labelled);

/// 8-vertex stand-in: adjacency 1_z (x) X_t (x) X_j, ground energy -1,
/// psi_{z,0} = |z>|+>|->, psi_{z,1} = |z>|->|+>.
ElementGraph mini_double_element();

/// The asset directory: $BHXY_ASSET_DIR if set, else the build default.
std::filesystem::path asset_directory();
/// g0.mtx in the asset directory, if present.
std::optional<std::filesystem::path> locate_g0_asset();

/// Resolves "mini", "g0" or a path to an .mtx asset.
ElementGraph resolve_element(const std::string& source);

struct ConformanceReport {
  double lambda_min = 0.0;
  bool lambda_min_matches_e1 = false;
  Eigen::Index ground_dim = 0;
  double basis_residual = 0.0;
  double orthonormality_error = 0.0;
  double span_sine = 1.0;
  bool span_match = false;
  double norm = 0.0;
  double tolerance = 0.0;

  bool conforming() const { return span_match && basis_residual <= tolerance; }
};

/// Diagonalizes the element and compares the numerical ground space with the
/// declared one. `tol` bounds eigenvalue degeneracy, residuals and e1 match.
ConformanceReport validate_element(const ElementGraph& element, double tol = 1e-9);

/// 4x4 matrix <psi_{x,b}| (1_z (x) |t><t| (x) 1_j) |psi_{z,a}>, rows 2x+b, cols 2z+a.
Eigen::Matrix4cd node_block_matrix(const ElementGraph& element, int t);

}  // namespace bhxy
