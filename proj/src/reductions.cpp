#include "bhxy/reductions.hpp"

#include "bhxy/graph_io.hpp"
#include "bhxy/sector.hpp"
#include "bhxy/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace bhxy {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidInstance, what);
}

}  // namespace

void validate(const FFBHInstance& inst) {
  const Eigen::Index k = inst.graph.num_vertices();
  require(inst.n >= 1 && inst.n <= k, "N must satisfy 1 <= N <= K (N=" + std::to_string(inst.n) + ", K=" +
                                          std::to_string(k) + ")");
  require(inst.t >= 4 * BigInt(k), "T must be at least 4K (T=" + inst.t.str() + ", K=" + std::to_string(k) + ")");
  require(inst.alpha >= 1, "alpha must be a positive integer");
}

void validate(const XYInstance& inst) {
  const Eigen::Index k = inst.graph.num_vertices();
  require(inst.n >= 1 && inst.n <= k, "N must satisfy 1 <= N <= K (N=" + std::to_string(inst.n) + ", K=" +
                                          std::to_string(k) + ")");
  require(inst.t >= 1, "T must be positive");
  require(std::isfinite(inst.c), "c must be finite");
}

double epsilon_of(const BigInt& t) { return 1.0 / t.convert_to<double>(); }

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Yes: return "yes";
    case Classification::No: return "no";
    case Classification::Undetermined: return "undetermined";
  }
  return "undetermined";
}

Verdict make_verdict(double measured, double low, double high, double tol) {
  Verdict v;
  v.measured = measured;
  v.low = low;
  v.high = high;
  v.solver_tol = tol;
  const bool yes = measured <= low + tol;
  const bool no = measured >= high - tol;
  if (yes && !no) v.classification = Classification::Yes;
  else if (no && !yes) v.classification = Classification::No;
  else v.classification = Classification::Undetermined;
  return v;
}

Verdict classify_ffbh(const FFBHInstance& inst, double tol) {
  validate(inst);
  const double eps = epsilon_of(inst.t);
  const double low = std::pow(eps, inst.alpha);
  const Lambda1Result r = lambda1_detail(inst.graph, inst.n, std::clamp(tol, 1e-12, 1e-10));
  Verdict v = make_verdict(r.lambda1, low, eps + low, tol);
  v.converged = r.converged;
  return v;
}

Verdict classify_xy(const XYInstance& inst, double tol) {
  validate(inst);
  const double eps = epsilon_of(inst.t);
  const Eigenpair p = lowest_eigenpair(xy_sector(inst.graph, inst.n), std::clamp(tol, 1e-12, 1e-10));
  Verdict v = make_verdict(p.value, inst.c, inst.c + eps, tol);
  v.converged = p.converged;
  return v;
}

XYInstance reduce_bh_to_xy(const FFBHInstance& inst, double mu_tol) {
  validate(inst);
  if (inst.alpha != 3) {
    throw Error(ErrorKind::AlphaMismatch, "the XY reduction is stated for alpha = 3, got " + std::to_string(inst.alpha));
  }
  const double m = mu(inst.graph, mu_tol);
  XYInstance out{inst.graph, inst.n, 0.0, 4 * inst.t, nlohmann::json::object()};
  out.c = inst.n * m + epsilon_of(out.t);
  out.provenance = {{"reduction", "bh_to_xy"},
                    {"source_T", inst.t.str()},
                    {"source_alpha", inst.alpha},
                    {"mu", m},
                    {"mu_tolerance", mu_tol},
                    {"c_formula", "N*mu + 1/(4T)"}};
  validate(out);
  return out;
}

FFBHInstance reduce_to_simple(const GateDiagram& d, const ElementGraph& element, int n, const BigInt& t, int alpha,
                              double tol) {
  const GateGraphCheck check = check_gate_graph(d, element, tol);
  if (!check.is_e1_gate_graph) {
    throw Error(ErrorKind::NotE1GateGraph, "mu(G) = " + std::to_string(check.mu) + " but the element energy is " +
                                               std::to_string(check.element_energy));
  }
  const Graph g = compile(d, element);
  FFBHInstance source{g, n, t, 8 * alpha, nlohmann::json::object()};
  validate(source);

  const DoubledGraph sl = build_SL(g, loopless_set(d, element));
  FFBHInstance out{build_NSL(sl), n, boost::multiprecision::pow(t, 7), alpha, nlohmann::json::object()};
  const Eigen::Index k2 = out.graph.num_vertices();
  const bool t_ok = out.t >= 4 * BigInt(k2);
  out.provenance = {{"reduction", "to_simple"},
                    {"source_K", g.num_vertices()},
                    {"source_T", t.str()},
                    {"source_alpha", 8 * alpha},
                    {"K_prime", k2},
                    {"T_prime", out.t.str()},
                    {"T_prime_ge_4K_prime", t_ok},
                    {"mu_source", check.mu},
                    {"element", to_string(element.source)},
                    {"epsilon_ceiling", "not enforced: the constant is not given numerically"}};
  if (!is_simple(out.graph)) throw Error(ErrorKind::InternalInvariant, "G^NSL is not simple");
  validate(out);
  return out;
}

nlohmann::json to_json(const Verdict& v) {
  return {{"classification", to_string(v.classification)},
          {"measured", v.measured},
          {"thresholds", {v.low, v.high}},
          {"solver_tol", v.solver_tol},
          {"converged", v.converged}};
}

// --- instance files ----------------------------------------------------------

namespace {

BigInt parse_bigint(const nlohmann::json& value) {
  try {
    if (value.is_string()) {
      const std::string s = value.get<std::string>();
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(s);
      return BigInt(s);
    }
    if (value.is_number_integer()) return BigInt(value.get<long long>());
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::ParseError, "T must be a decimal integer string");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::ParseError, std::string("instance is missing \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad \"") + key + "\": " + e.what());
  }
}

}  // namespace

InstanceFile read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "instance must be a JSON object");
  const std::filesystem::path base = path.parent_path();

  InstanceFile file;
  file.kind = field<std::string>(doc, "kind");
  if (file.kind != "ffbh" && file.kind != "xy") throw Error(ErrorKind::ParseError, "unknown kind " + file.kind);

  std::optional<Graph> graph;
  if (doc.contains("diagram")) {
    file.element = doc.value("element", std::string("mini"));
    const std::filesystem::path maybe = resolve(base, file.element);
    const ElementGraph element = resolve_element(std::filesystem::exists(maybe) ? maybe.string() : file.element);
    file.diagram = read_diagram_file(resolve(base, field<std::string>(doc, "diagram")), element.node_rule);
    graph = compile(*file.diagram, element);
  } else {
    graph = read_graph_file(resolve(base, field<std::string>(doc, "graph")));
  }
  const int n = field<int>(doc, "N");
  const BigInt t = parse_bigint(doc.contains("T") ? doc.at("T") : nlohmann::json());
  const nlohmann::json provenance = doc.value("provenance", nlohmann::json::object());

  if (file.kind == "ffbh") {
    file.ffbh = FFBHInstance{*graph, n, t, field<int>(doc, "alpha"), provenance};
    validate(*file.ffbh);
  } else {
    file.xy = XYInstance{*graph, n, field<double>(doc, "c"), t, provenance};
    validate(*file.xy);
  }
  return file;
}

namespace {

std::vector<std::filesystem::path> write_doc(const std::filesystem::path& path, nlohmann::json doc, const Graph& g) {
  std::filesystem::path graph_path = path;
  graph_path.replace_extension(".mtx");
  std::vector<std::filesystem::path> written = write_graph_file(graph_path, g);
  doc["graph"] = graph_path.filename().string();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  written.insert(written.begin(), path);
  return written;
}

}  // namespace

std::vector<std::filesystem::path> write_instance_file(const std::filesystem::path& path, const FFBHInstance& inst) {
  nlohmann::json doc = {{"kind", "ffbh"},
                        {"N", inst.n},
                        {"T", inst.t.str()},
                        {"alpha", inst.alpha},
                        {"provenance", inst.provenance}};
  return write_doc(path, std::move(doc), inst.graph);
}

std::vector<std::filesystem::path> write_instance_file(const std::filesystem::path& path, const XYInstance& inst) {
  nlohmann::json doc = {{"kind", "xy"}, {"N", inst.n}, {"T", inst.t.str()}, {"c", inst.c}, {"provenance", inst.provenance}};
  return write_doc(path, std::move(doc), inst.graph);
}

}  // namespace bhxy
