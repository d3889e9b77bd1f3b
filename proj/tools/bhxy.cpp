// bhxy: compile gate diagrams, compute sector spectra, run verification
// suites and map problem instances.

#include "bhxy/diagram.hpp"
#include "bhxy/element.hpp"
#include "bhxy/graph_io.hpp"
#include "bhxy/reductions.hpp"
#include "bhxy/sector.hpp"
#include "bhxy/suites.hpp"
#include "bhxy/transforms.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bhxy;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SolverNoConvergence:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::InternalInvariant:
      return kExitSolver;
    default:
      return kExitInput;
  }
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

/// Collects what a run read and wrote; written on every exit path that gets
/// past argument parsing.
struct Run {
  std::string command;
  std::vector<fs::path> inputs;
  json tolerances = json::object();
  std::uint64_t seed = 0;
  std::vector<fs::path> outputs;
  fs::path manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void input(const fs::path& p) {
    inputs.push_back(p);
    const fs::path side = label_sidecar_path(p);
    if (p.extension() == ".mtx" && fs::exists(side)) inputs.push_back(side);
  }

  void write_manifest(int exit_code) {
    json digests = json::object();
    for (const auto& p : inputs) {
      if (fs::exists(p)) digests[p.string()] = "sha256:" + sha256_file(p);
    }
    json outs = json::array();
    for (const auto& p : outputs) {
      if (fs::exists(p)) outs.push_back(p.string());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json doc = {{"command", command}, {"inputs", digests},       {"tolerances", tolerances}, {"seed", seed},
                      {"outputs", outs},    {"exit_code", exit_code}, {"wall_time", wall}};
    std::ofstream out(manifest);
    if (out) out << doc.dump(2) << '\n';
  }
};

void emit(const json& report, const std::string& out_path, Run& run) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + out_path);
    out << text;
    run.outputs.emplace_back(out_path);
  }
}

/// Element source: "mini", "g0" or a path to an .mtx asset.
ElementGraph load_element_source(const std::string& source, Run& run) {
  if (fs::exists(source)) run.input(source);
  else if (source == "g0") {
    if (auto p = locate_g0_asset()) run.input(*p);
  }
  return resolve_element(source);
}

// --- commands ----------------------------------------------------------------

struct CompileArgs {
  std::string diagram, element = "mini", out;
  double tol = 1e-9;
};

int cmd_compile(const CompileArgs& a, bool dry_run, Run& run) {
  run.tolerances = {{"tol", a.tol}};
  run.input(a.diagram);
  const ElementGraph element = load_element_source(a.element, run);
  const GateDiagram d = read_diagram_file(a.diagram, element.node_rule);
  if (dry_run) return kExitPass;
  const Graph g = compile(d, element);
  const GateGraphCheck check = check_gate_graph(d, element, a.tol);
  for (const auto& p : write_graph_file(a.out, g)) run.outputs.push_back(p);
  const json report = {{"K", g.num_vertices()},
                       {"R", d.num_elements},
                       {"element", to_string(element.source)},
                       {"mu", check.mu},
                       {"element_energy", check.element_energy},
                       {"e1_gate_graph", check.is_e1_gate_graph},
                       {"output", a.out}};
  emit(report, "", run);
  return kExitPass;
}

struct SpectrumArgs {
  std::string graph, sector = "bh", out;
  int n = 1;
  double tol = 1e-10;
};

int cmd_spectrum(const SpectrumArgs& a, bool dry_run, Run& run) {
  run.tolerances = {{"tol", a.tol}};
  run.input(a.graph);
  const Graph g = read_graph_file(a.graph);
  if (a.n < 0 || a.n > g.num_vertices()) {
    throw Error(ErrorKind::BadWeight, "N=" + std::to_string(a.n) + " outside [0, K]");
  }
  if (dry_run) return kExitPass;
  json report = {{"sector", a.sector}, {"N", a.n}, {"K", g.num_vertices()}, {"tol", a.tol}};
  bool converged = true;
  if (a.sector == "xy") {
    const SectorOperator op = xy_sector(g, a.n);
    const Eigenpair p = lowest_eigenpair(op, a.tol);
    report["theta"] = p.value;
    report["mu"] = mu(g, a.tol);
    report["basis_dim"] = op.dim();
    converged = p.converged;
  } else {
    const Lambda1Result r = lambda1_detail(g, a.n, a.tol);
    report["lambda1"] = r.lambda1;
    report["ground_energy"] = r.ground_energy;
    report["mu"] = r.mu;
    report["basis_dim"] = r.basis_dim;
    converged = r.converged;
  }
  report["converged"] = converged;
  emit(report, a.out, run);
  return converged ? kExitPass : kExitSolver;
}

struct VerifyArgs {
  std::string diagram, graph, element = "mini", suite = "section4", out;
  int n = 1;
  int trials = 200;
  std::uint64_t seed = 1;
  Section4Options s4;
  double hardcore_tol = 1e-12;
  double certificate_slack = 1e-9;
};

int cmd_verify(const VerifyArgs& a, bool dry_run, Run& run) {
  run.seed = a.seed;
  if (a.suite == "certificates") {
    run.tolerances = {{"slack", a.certificate_slack}};
    if (dry_run) return kExitPass;
    const CertificateSuite s = certificate_suite(a.trials, a.seed, 40, a.certificate_slack);
    emit(to_json(s), a.out, run);
    return s.pass() ? kExitPass : kExitAssertion;
  }

  std::optional<Graph> graph;
  std::optional<GateDiagram> d;
  std::optional<ElementGraph> element;
  if (!a.diagram.empty()) {
    run.input(a.diagram);
    element = load_element_source(a.element, run);
    d = read_diagram_file(a.diagram, element->node_rule);
  }
  if (a.suite == "hardcore") {
    run.tolerances = {{"tol", a.hardcore_tol}};
    if (!a.graph.empty()) {
      run.input(a.graph);
      graph = read_graph_file(a.graph);
    } else if (d) {
      if (!dry_run) graph = compile(*d, *element);
    } else {
      throw Error(ErrorKind::ParseError, "hardcore suite needs a diagram or --graph");
    }
    if (dry_run) return kExitPass;
    const auto cases = hardcore_suite(*graph, a.n, a.hardcore_tol);
    const json report = to_json(cases, a.hardcore_tol);
    emit(report, a.out, run);
    return report["pass"].get<bool>() ? kExitPass : kExitAssertion;
  }

  if (!d) throw Error(ErrorKind::ParseError, "section4 suite needs a diagram");
  Section4Options opts = a.s4;
  opts.seed = a.seed;
  run.tolerances = {{"tol", opts.tol},
                    {"eigen_tol", opts.eigen_tol},
                    {"null_threshold", opts.null_threshold},
                    {"span_threshold", opts.span_threshold},
                    {"equal_nsl_tol", opts.equal_nsl_tol}};
  if (dry_run) return kExitPass;
  const Section4Report r = verify_section4(*d, *element, a.n, opts);
  emit(to_json(r), a.out, run);
  return r.pass() ? kExitPass : kExitAssertion;
}

struct ReduceArgs {
  std::string instance, target = "xy", out;
  double tol = 1e-10;
};

int cmd_reduce(const ReduceArgs& a, bool dry_run, Run& run) {
  run.tolerances = {{"mu_tol", a.tol}};
  run.input(a.instance);
  const InstanceFile file = read_instance_file(a.instance);
  if (file.kind != "ffbh") throw Error(ErrorKind::InvalidInstance, "reductions take an ffbh instance");
  if (a.target == "simple" && !file.diagram) {
    throw Error(ErrorKind::InvalidInstance, "--target simple needs a diagram-backed instance");
  }
  if (dry_run) return kExitPass;

  json report;
  if (a.target == "xy") {
    const XYInstance out = reduce_bh_to_xy(*file.ffbh, a.tol);
    for (const auto& p : write_instance_file(a.out, out)) run.outputs.push_back(p);
    report = {{"target", "xy"}, {"N", out.n}, {"T", out.t.str()}, {"c", out.c}, {"provenance", out.provenance}};
  } else {
    const ElementGraph element = resolve_element(file.element);
    if (file.ffbh->alpha % 8 != 0) {
      throw Error(ErrorKind::AlphaMismatch, "source exponent must be 8 alpha, got " + std::to_string(file.ffbh->alpha));
    }
    const FFBHInstance out =
        reduce_to_simple(*file.diagram, element, file.ffbh->n, file.ffbh->t, file.ffbh->alpha / 8);
    for (const auto& p : write_instance_file(a.out, out)) run.outputs.push_back(p);
    report = {{"target", "simple"},
              {"K", out.graph.num_vertices()},
              {"is_simple", is_simple(out.graph)},
              {"N", out.n},
              {"T", out.t.str()},
              {"alpha", out.alpha},
              {"provenance", out.provenance}};
  }
  report["output"] = a.out;
  emit(report, "", run);
  return kExitPass;
}

struct ClassifyArgs {
  std::string instance, out;
  double tol = 1e-10;
};

int cmd_classify(const ClassifyArgs& a, bool dry_run, Run& run) {
  run.tolerances = {{"tol", a.tol}};
  run.input(a.instance);
  const InstanceFile file = read_instance_file(a.instance);
  if (dry_run) return kExitPass;
  const Verdict v = file.ffbh ? classify_ffbh(*file.ffbh, a.tol) : classify_xy(*file.xy, a.tol);
  if (2 * a.tol >= v.high - v.low) {
    std::cerr << "warning: --tol " << a.tol << " is not below half the promise gap " << v.high - v.low
              << "; no verdict is possible\n";
  }
  json report = to_json(v);
  report["kind"] = file.kind;
  emit(report, a.out, run);
  return v.converged ? kExitPass : kExitSolver;
}

void report_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard / XY gate-graph toolkit"};
  app.require_subcommand(1);
  bool dry_run = false;
  std::string manifest;
  app.add_flag("--dry-run", dry_run, "Validate inputs without computing");
  app.add_option("--manifest", manifest, "Run manifest path");

  CompileArgs ca;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a gate diagram into a graph");
  compile_cmd->add_option("diagram", ca.diagram, "Diagram JSON")->required()->check(CLI::ExistingFile);
  compile_cmd->add_option("-e,--element", ca.element, "mini, g0 or an element .mtx")->capture_default_str();
  compile_cmd->add_option("-o,--out", ca.out, "Output .mtx")->required();
  compile_cmd->add_option("--tol", ca.tol, "e1 comparison tolerance")->capture_default_str();

  SpectrumArgs sa;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Lowest eigenvalue in a particle-number sector");
  spectrum_cmd->add_option("graph", sa.graph, "Graph .mtx")->required()->check(CLI::ExistingFile);
  spectrum_cmd->add_option("--sector", sa.sector)->check(CLI::IsMember({"xy", "bh"}))->capture_default_str();
  spectrum_cmd->add_option("-N,--N", sa.n, "Particles / Hamming weight")->capture_default_str();
  spectrum_cmd->add_option("--tol", sa.tol, "Eigensolver residual tolerance")->capture_default_str();
  spectrum_cmd->add_option("-o,--out", sa.out, "Also write the report here");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("diagram", va.diagram, "Diagram JSON")->check(CLI::ExistingFile);
  verify_cmd->add_option("--graph", va.graph, "Graph .mtx for the hardcore suite")->check(CLI::ExistingFile);
  verify_cmd->add_option("-e,--element", va.element, "mini, g0 or an element .mtx")->capture_default_str();
  verify_cmd->add_option("--suite", va.suite)
      ->check(CLI::IsMember({"section4", "certificates", "hardcore"}))
      ->capture_default_str();
  verify_cmd->add_option("-N,--N", va.n, "Particles")->capture_default_str();
  verify_cmd->add_option("--seed", va.seed)->capture_default_str();
  verify_cmd->add_option("--trials", va.trials, "Certificate trials")->capture_default_str();
  verify_cmd->add_option("--tol", va.s4.tol)->capture_default_str();
  verify_cmd->add_option("--eigen-tol", va.s4.eigen_tol)->capture_default_str();
  verify_cmd->add_option("--null-threshold", va.s4.null_threshold)->capture_default_str();
  verify_cmd->add_option("--span-threshold", va.s4.span_threshold)->capture_default_str();
  verify_cmd->add_option("--equal-nsl-tol", va.s4.equal_nsl_tol)->capture_default_str();
  verify_cmd->add_option("--lemma4-pairs", va.s4.lemma4_pairs)->capture_default_str();
  verify_cmd->add_option("--max-doubled-vertices", va.s4.max_doubled_vertices)->capture_default_str();
  verify_cmd->add_option("--hardcore-tol", va.hardcore_tol)->capture_default_str();
  verify_cmd->add_option("--certificate-slack", va.certificate_slack)->capture_default_str();
  verify_cmd->add_option("-o,--out", va.out, "Also write the report here");

  ReduceArgs ra;
  auto* reduce_cmd = app.add_subcommand("reduce", "Map an ffbh instance to an XY or simple-graph instance");
  reduce_cmd->add_option("instance", ra.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  reduce_cmd->add_option("--target", ra.target)->check(CLI::IsMember({"xy", "simple"}))->capture_default_str();
  reduce_cmd->add_option("-o,--out", ra.out, "Output instance JSON")->required();
  reduce_cmd->add_option("--mu-tol", ra.tol)->capture_default_str();

  ClassifyArgs cla;
  auto* classify_cmd = app.add_subcommand("classify", "Decide an instance against its promise thresholds");
  classify_cmd->add_option("instance", cla.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("--tol", cla.tol)->capture_default_str();
  classify_cmd->add_option("-o,--out", cla.out, "Also write the verdict here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what(), kExitInput);
    return kExitInput;
  }

  Run run;
  run.command = "bhxy";
  for (int i = 1; i < argc; ++i) run.command += std::string(" ") + argv[i];
  std::string primary;
  if (*compile_cmd) primary = ca.out;
  if (*reduce_cmd) primary = ra.out;
  if (*spectrum_cmd) primary = sa.out;
  if (*verify_cmd) primary = va.out;
  if (*classify_cmd) primary = cla.out;
  run.manifest = !manifest.empty() ? fs::path(manifest)
                 : !primary.empty() ? fs::path(primary + ".manifest.json")
                                    : fs::path("bhxy-" + app.get_subcommands().front()->get_name() + ".manifest.json");

  int code = kExitPass;
  try {
    if (*compile_cmd) code = cmd_compile(ca, dry_run, run);
    else if (*spectrum_cmd) code = cmd_spectrum(sa, dry_run, run);
    else if (*verify_cmd) code = cmd_verify(va, dry_run, run);
    else if (*reduce_cmd) code = cmd_reduce(ra, dry_run, run);
    else code = cmd_classify(cla, dry_run, run);
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    report_error(std::string(to_string(e.kind())), e.what(), code);
  } catch (const std::exception& e) {
    code = kExitSolver;
    report_error("Unexpected", e.what(), code);
  }
  run.write_manifest(code);
  return code;
}
