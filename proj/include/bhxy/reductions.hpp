#pragma once

#include "bhxy/diagram.hpp"
#include "bhxy/element.hpp"
#include "bhxy/graph.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace bhxy {

using BigInt = boost::multiprecision::cpp_int;

/// Frustration-free Bose-Hubbard instance: is lambda_N(G) <= eps^alpha or
/// >= eps + eps^alpha, with eps = 1/T.
struct FFBHInstance {
  Graph graph;
  int n = 0;
  BigInt t = 1;
  int alpha = 1;
  nlohmann::json provenance = nlohmann::json::object();
};

/// XY instance: is theta_N(G) <= c or >= c + eps, with eps = 1/T.
struct XYInstance {
  Graph graph;
  int n = 0;
  double c = 0.0;
  BigInt t = 1;
  nlohmann::json provenance = nlohmann::json::object();
};

/// Throws InvalidInstance unless T >= 4K, 1 <= N <= K and alpha >= 1.
void validate(const FFBHInstance& inst);
/// Throws InvalidInstance unless 1 <= N <= K and T >= 1.
void validate(const XYInstance& inst);

/// 1/T in double precision (relative error below 2^-52).
double epsilon_of(const BigInt& t);

enum class Classification { Yes, No, Undetermined };
std::string to_string(Classification c);

struct Verdict {
  Classification classification = Classification::Undetermined;
  double measured = 0.0;
  double low = 0.0;
  double high = 0.0;
  double solver_tol = 0.0;
  bool converged = true;
};

/// yes if measured <= low + tol, no if measured >= high - tol; undetermined
/// when both or neither hold.
Verdict make_verdict(double measured, double low, double high, double tol);

Verdict classify_ffbh(const FFBHInstance& inst, double tol = 1e-10);
Verdict classify_xy(const XYInstance& inst, double tol = 1e-10);

/// G, N, T -> G, N, 4T with c = N mu(G) + 1/(4T). Requires alpha = 3.
XYInstance reduce_bh_to_xy(const FFBHInstance& inst, double mu_tol = 1e-10);

/// A diagram-backed instance with precision 1/T and exponent 8 alpha on the
/// compiled graph G maps to (G^NSL, N, T^7) with exponent alpha.
FFBHInstance reduce_to_simple(const GateDiagram& d, const ElementGraph& element, int n, const BigInt& t,
                              int alpha = 1, double tol = 1e-9);

nlohmann::json to_json(const Verdict& v);

// --- instance files ----------------------------------------------------------

/// Parsed instance file. Diagram-backed instances carry the diagram and the
/// element source; their graph is the compiled diagram.
struct InstanceFile {
  std::string kind;  // "ffbh" | "xy"
  std::optional<FFBHInstance> ffbh;
  std::optional<XYInstance> xy;
  std::optional<GateDiagram> diagram;
  std::string element;
};

/// Reads {"kind","graph","N","T","alpha"?,"c"?} with optional "diagram" and
/// "element". Relative paths resolve against the file's directory.
InstanceFile read_instance_file(const std::filesystem::path& path);

/// Writes the instance JSON and its graph next to it (stem.mtx). Returns every
/// path written.
std::vector<std::filesystem::path> write_instance_file(const std::filesystem::path& path, const FFBHInstance& inst);
std::vector<std::filesystem::path> write_instance_file(const std::filesystem::path& path, const XYInstance& inst);

}  // namespace bhxy
