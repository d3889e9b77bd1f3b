#include "bhxy/graph_io.hpp"

#include "bhxy/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bhxy {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Graph read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty Matrix Market stream");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate") {
    throw Error(ErrorKind::ParseError, "expected '%%MatrixMarket matrix coordinate' header");
  }
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "pattern" && field != "integer" && field != "real") {
    throw Error(ErrorKind::ParseError, "unsupported field '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw Error(ErrorKind::ParseError, "unsupported symmetry '" + symmetry + "'");
  }

  std::string scheme;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != '%') break;
    const std::string key = "% bhxy-vertex-labels:";
    if (line.rfind(key, 0) == 0) {
      std::istringstream rest(line.substr(key.size()));
      rest >> scheme;
    }
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0) {
      throw Error(ErrorKind::ParseError, "bad size line '" + line + "'");
    }
  }
  if (rows != cols) throw Error(ErrorKind::NotSymmetric, "matrix is not square");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * nnz));
  for (long long e = 0; e < nnz; ++e) {
    long long i = 0, j = 0;
    double value = 1.0;
    if (!(in >> i >> j)) throw Error(ErrorKind::ParseError, "truncated entry list");
    if (field != "pattern" && !(in >> value)) throw Error(ErrorKind::ParseError, "missing entry value");
    if (i < 1 || j < 1 || i > rows || j > cols) throw Error(ErrorKind::ParseError, "entry index out of range");
    if (value == 0.0) continue;
    triplets.emplace_back(i - 1, j - 1, value);
    if (symmetry == "symmetric" && i != j) triplets.emplace_back(j - 1, i - 1, value);
  }
  SparseMatrix a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return Graph(std::move(a), {}, scheme);
}

void write_matrix_market(std::ostream& out, const Graph& g) {
  const SparseMatrix& a = g.adjacency();
  long long nnz = 0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() <= r) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
  out << "% bhxy-vertex-labels: " << (g.label_scheme().empty() ? "none" : g.label_scheme()) << " v"
      << kLabelSchemeVersion << "\n";
  out << a.rows() << " " << a.cols() << " " << nnz << "\n";
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() <= r) out << r + 1 << " " << it.col() + 1 << "\n";
    }
  }
}

void write_symmetric_operator(std::ostream& out, const SparseMatrix& op, const std::string& comment) {
  long long nnz = 0;
  for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(op, r); it; ++it) {
      if (it.col() <= r) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  if (!comment.empty()) out << "% " << comment << "\n";
  out << op.rows() << " " << op.cols() << " " << nnz << "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(op, r); it; ++it) {
      if (it.col() > r) continue;
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << r + 1 << " " << it.col() + 1 << " " << buf << "\n";
    }
  }
}

std::filesystem::path label_sidecar_path(const std::filesystem::path& mtx_path) {
  std::filesystem::path p = mtx_path;
  p.replace_extension(".labels.json");
  return p;
}

LabelSidecar read_label_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    LabelSidecar sidecar;
    sidecar.scheme = doc.at("scheme").get<std::string>();
    sidecar.version = doc.value("version", kLabelSchemeVersion);
    sidecar.labels = doc.at("labels").get<std::vector<VertexLabel>>();
    return sidecar;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_label_sidecar(const std::filesystem::path& path, const LabelSidecar& sidecar) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  nlohmann::json doc;
  doc["scheme"] = sidecar.scheme;
  doc["version"] = sidecar.version;
  doc["labels"] = sidecar.labels;
  out << doc.dump() << "\n";
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  Graph g = read_matrix_market(in);
  const auto sidecar_path = label_sidecar_path(path);
  if (!std::filesystem::exists(sidecar_path)) return g;
  LabelSidecar sidecar = read_label_sidecar(sidecar_path);
  if (static_cast<Eigen::Index>(sidecar.labels.size()) != g.num_vertices()) {
    throw Error(ErrorKind::BadLabeling, "sidecar has " + std::to_string(sidecar.labels.size()) +
                                            " labels for " + std::to_string(g.num_vertices()) + " vertices");
  }
  return Graph(g.adjacency(), std::move(sidecar.labels), sidecar.scheme);
}

std::vector<std::filesystem::path> write_graph_file(const std::filesystem::path& path, const Graph& g) {
  std::vector<std::filesystem::path> written;
  {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    write_matrix_market(out, g);
  }
  written.push_back(path);
  if (!g.labels().empty()) {
    const auto sidecar = label_sidecar_path(path);
    write_label_sidecar(sidecar, {g.label_scheme(), kLabelSchemeVersion, g.labels()});
    written.push_back(sidecar);
  }
  return written;
}

}  // namespace bhxy
