#include "fincon/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fincon/convergence.hpp"
#include "fincon/error.hpp"
#include "fincon/graph_io.hpp"
#include "fincon/json_io.hpp"
#include "fincon/sdp.hpp"
#include "fincon/sos.hpp"
#include "fincon/stability.hpp"

namespace fincon::cli {

namespace {

struct Config {
  std::string graph_path;
  std::string format;
  std::string output;
  bool json_stdout = false;

  std::string form = "ms";
  std::string edge;
  std::string b_path;

  int r = 2;
  int r_min = 2;
  int r_max = 4;
  int threads = 0;
  bool direct = false;
  bool certificates = false;
  std::string sdpa_path;
  std::string cert_path;
  std::string point_path;
  std::string lp_path;
  bool oracle = false;

  double gap = 1e-8;
  double residual = 1e-8;
  int max_iterations = 200;
  int cap_r = 6;
  int cap_basis = 500;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

Graph load_graph(const Config& c) {
  std::optional<GraphFormat> fmt;
  if (!c.format.empty()) {
    fmt = format_from_name(c.format);
    if (!fmt) throw Error("unknown graph format '" + c.format + "'");
  }
  try {
    return read_graph_file(c.graph_path, fmt);
  } catch (const ParseError& e) {
    throw Error(c.graph_path + ": " + e.what());
  }
}

Edge parse_edge(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error("edge must be written i,j, got '" + text + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const int a = std::stoi(text.substr(0, comma), &p1);
    const int b = std::stoi(text.substr(comma + 1), &p2);
    if (p1 != comma || p2 != text.size() - comma - 1) throw std::invalid_argument(text);
    return Edge(a, b);
  } catch (const std::logic_error&) {
    throw Error("edge must be written i,j, got '" + text + "'");
  }
}

QuadForm load_form(const Graph& g, const Config& c) {
  if (c.form == "ms") return ms_matrix(g);
  if (c.form == "ms-e") {
    if (c.edge.empty()) throw Error("--form ms-e needs --edge i,j");
    return ms_e_matrix(g, parse_edge(c.edge));
  }
  if (c.form == "ms-B") {
    if (c.b_path.empty()) throw Error("--form ms-B needs --B file");
    Json j = read_json(c.b_path);
    if (j.is_object() && j.contains("graph")) {
      QuadForm q = quadform_from_json(j);
      if (!(q.graph() == g)) throw Error("the graph in '" + c.b_path + "' differs from the input graph");
      return q;
    }
    if (j.is_array()) j = Json{{"edge_values", j}};
    j["graph"] = to_json(g);
    return quadform_from_json(j);
  }
  throw Error("unknown form '" + c.form + "' (expected ms, ms-e or ms-B)");
}

LevelOptions level_options(const Config& c) {
  LevelOptions o;
  o.solver.gap_tolerance = c.gap;
  o.solver.residual_tolerance = c.residual;
  o.solver.max_iterations = c.max_iterations;
  o.caps.r_max = c.cap_r;
  o.caps.basis_cap = c.cap_basis;
  o.formulation = c.direct ? Formulation::Direct : Formulation::Reduced;
  return o;
}

int thread_count(const Config& c) {
  if (c.threads > 0) return c.threads;
  if (const char* env = std::getenv("FINCON_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw Error("FINCON_THREADS must be a positive integer, got '" + std::string(env) + "'");
  }
  return 1;
}

std::string edge_text(Edge e) { return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}"; }

std::string value_text(double v) {
  if (std::isnan(v)) return "n/a";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json document(const std::string& command) {
  return {{"schema_version", kSchemaVersion}, {"command", command}};
}

std::string level_line(const HierarchyResult& h) {
  std::string s = "r=" + std::to_string(h.r) + "  " + sdp::to_string(h.solver_status) + "  value " +
                  value_text(h.value);
  if (h.verification) s += h.verification->pass ? "  certificate ok" : "  certificate FAILED";
  if (h.attained) s += "  attains 1/alpha";
  return s;
}

struct Consistency {
  bool consistent = true;
  std::string detail;
};

// The verdict and the numerics disagree if a level attains 1/alpha under
// NoFiniteConvergence, or if a level reaches 1/alpha under
// FiniteConvergence with a certificate that does not verify.
Consistency cross_check(const Verdict& v, const std::vector<HierarchyResult>& levels) {
  Consistency c;
  for (const auto& h : levels) {
    if (h.solver_status != sdp::Status::Optimal) continue;
    const bool reaches = h.value >= h.target - kAttainmentTolerance;
    if (v.status == ConvergenceStatus::NoFiniteConvergence && h.attained) {
      c.consistent = false;
      c.detail = "level " + std::to_string(h.r) + " attains 1/alpha with a verified certificate";
      return c;
    }
    if (v.status == ConvergenceStatus::FiniteConvergence && reaches && !h.attained) {
      c.consistent = false;
      c.detail = "level " + std::to_string(h.r) + " reaches 1/alpha but its certificate fails verification";
      return c;
    }
  }
  c.detail = "verdict and level values agree";
  return c;
}

class Runner {
 public:
  Runner(Config c, std::ostream& out) : c_(std::move(c)), out_(out) {}

  void emit(const Json& doc, const std::string& summary) {
    const std::string text = doc.dump(2) + "\n";
    if (!c_.output.empty()) {
      std::ofstream f(c_.output, std::ios::binary);
      if (!f) throw Error("cannot write '" + c_.output + "'");
      f << text;
    }
    if (c_.json_stdout)
      out_ << text;
    else
      out_ << summary;
  }

  void alpha_cmd() {
    const Graph g = load_graph(c_);
    Json doc = document("alpha");
    const VertexSet s = maximum_stable_set(g);
    doc["graph"] = to_json(g);
    doc["alpha"] = static_cast<int>(s.size());
    doc["stable_set"] = to_json(s);
    std::string summary = "alpha = " + std::to_string(s.size()) + "\n";
    if (c_.oracle) {
      const OracleAlphaRun run = alpha_via_critical_oracle(g, exact_critical_oracle());
      doc["oracle"] = to_json(run);
      summary += "critical-edge oracle: alpha = " + std::to_string(run.alpha) + " after " +
                 std::to_string(run.oracle_calls) + " oracle calls\n";
    }
    emit(doc, summary);
  }

  void critical_cmd() {
    const Graph g = load_graph(c_);
    const CriticalReport r = critical_report(g);
    Json doc = document("critical");
    const Json rj = to_json(r);
    for (const auto& [k, v] : rj.items()) doc[k] = v;
    std::string summary = "alpha = " + std::to_string(r.alpha) + "\ncritical edges:";
    for (const Edge& e : r.critical_edges) summary += " " + edge_text(e);
    if (r.critical_edges.empty()) summary += " none";
    emit(doc, summary + "\n");
  }

  void twins_cmd() {
    const Graph g = load_graph(c_);
    Json doc = document("twins");
    Json pairs = Json::array();
    std::string summary = "twin pairs:";
    for (const auto& [a, b] : twin_pairs(g)) {
      pairs.push_back({a, b});
      summary += " " + edge_text(Edge(a, b));
    }
    if (pairs.empty()) summary += " none";
    doc["twin_pairs"] = pairs;
    emit(doc, summary + "\n");
  }

  void contract_cmd() {
    const Graph g = load_graph(c_);
    const TwinContraction tc = contract_all_twins(g);
    Json doc = document("contract");
    doc["contraction"] = to_json(tc);
    emit(doc, "contracted to " + std::to_string(tc.graph.n()) + " vertices, " +
                  std::to_string(tc.graph.edge_count()) + " edges in " + std::to_string(tc.trace.size()) +
                  " steps\n");
  }

  Verdict verdict(const Graph& g, const QuadForm& q) {
    if (c_.form == "ms") return decide_ms(g);
    if (c_.form == "ms-e") return decide_ms_e(g, parse_edge(c_.edge));
    return decide_ms_B(q);
  }

  void decide_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const Verdict v = verdict(g, q);
    Json doc = document("decide");
    doc["form"] = c_.form;
    doc["verdict"] = to_json(v);
    emit(doc, to_string(v.status) + " (" + v.reason + ")\n");
  }

  void level_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const LevelOptions opts = level_options(c_);
    if (!c_.sdpa_path.empty()) {
      const sdp::Instance inst =
          c_.direct ? assemble_level(q, c_.r, opts.caps) : assemble_reduced_level(q, c_.r, opts.caps);
      std::ofstream f(c_.sdpa_path, std::ios::binary);
      if (!f) throw Error("cannot write '" + c_.sdpa_path + "'");
      f << sdp::write_sdpa(inst);
    }
    const HierarchyResult h = solve_level(q, c_.r, opts);
    Json doc = document("level");
    doc["form"] = c_.form;
    doc["result"] = to_json(h, true);
    emit(doc, level_line(h) + "\n");
  }

  void sweep_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const auto levels = sweep_levels(q, c_.r_min, c_.r_max, level_options(c_), thread_count(c_));
    Json doc = document("sweep");
    doc["form"] = c_.form;
    Json arr = Json::array();
    std::string summary;
    for (const auto& h : levels) {
      arr.push_back(to_json(h, c_.certificates));
      summary += level_line(h) + "\n";
    }
    doc["levels"] = arr;
    emit(doc, summary);
  }

  void certify_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const auto cert = certificate_from_json(read_json(c_.cert_path));
    const CertificateReport rep =
        std::visit([&](const auto& cc) { return verify_certificate(q, cc); }, cert);
    Json doc = document("certify");
    doc["form"] = c_.form;
    doc["exact"] = std::holds_alternative<RationalCertificate>(cert);
    doc["report"] = to_json(rep);
    emit(doc, std::string(rep.pass ? "PASS" : "FAIL") + "  residual " + value_text(rep.residual) +
                  "  min Gram eigenvalue " + value_text(rep.min_gram_eigenvalue) + "\n");
  }

  void kkt_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const auto pt = point_from_json(read_json(c_.point_path));
    const KktReport rep = std::visit([&](const auto& x) { return kkt_check(q, x); }, pt);
    Json doc = document("kkt");
    doc["form"] = c_.form;
    doc["report"] = to_json(rep);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    emit(doc, std::string("CQC ") + yn(rep.cqc) + "  SCC " + yn(rep.scc) + "  SOSC " + yn(rep.sosc) +
                  "  minimizer " + yn(rep.minimizer) + "\n");
  }

  void bound_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const FeasibilityBound b = feasibility_bound(q);
    Json doc = document("bound");
    doc["form"] = c_.form;
    doc["bound"] = to_json(b);
    doc["verification"] = to_json(verify_certificate(q, b.certificate));
    emit(doc, "lower bound " + to_string(b.bound) + " (n * lambda_min = " + value_text(b.float_bound) + ")\n");
  }

  void lp_cmd() {
    const Json j = read_json(c_.lp_path);
    auto vec = [](const Json& a) {
      std::vector<Rational> out;
      for (const auto& v : a) out.push_back(rational_from_json(v));
      return out;
    };
    auto mat = [&](const char* key) {
      std::vector<std::vector<Rational>> out;
      if (j.contains(key))
        for (const auto& row : j.at(key)) out.push_back(vec(row));
      return out;
    };
    LpProblem lp;
    lp.c = vec(j.at("c"));
    lp.A = mat("A");
    lp.b = j.contains("b") ? vec(j.at("b")) : std::vector<Rational>{};
    lp.D = mat("D");
    lp.f = j.contains("f") ? vec(j.at("f")) : std::vector<Rational>{};
    const LpLevelOne r = lp_level_one(lp);
    Json doc = document("lp");
    doc["result"] = to_json(r);
    emit(doc, to_string(r.status) + (r.status == LpStatus::Optimal ? "  value " + to_string(r.value) : "") + "\n");
  }

  void report_cmd() {
    const Graph g = load_graph(c_);
    const QuadForm q = load_form(g, c_);
    const CriticalReport cr = critical_report(g);
    Json doc = document("report");
    doc["graph"] = to_json(g);
    doc["form"] = c_.form;
    doc["quadratic_form"] = to_json(q);
    const Json crj = to_json(cr);
    for (const auto& [k, v] : crj.items()) doc[k] = v;

    std::string summary = "alpha = " + std::to_string(cr.alpha) + ", " +
                          std::to_string(cr.critical_edges.size()) + " critical edges, " +
                          std::to_string(cr.twin_pairs.size()) + " twin pairs\n";
    Verdict v;
    try {
      v = verdict(g, q);
      doc["verdict"] = to_json(v);
      summary += "verdict: " + to_string(v.status) + " (" + v.reason + ")\n";
    } catch (const PreconditionError& e) {
      v.status = ConvergenceStatus::UnknownByTheorem;
      doc["verdict"] = {{"status", "Unavailable"}, {"error", e.what()}};
      summary += std::string("verdict unavailable: ") + e.what() + "\n";
    }

    const LevelOptions opts = level_options(c_);
    std::vector<HierarchyResult> levels;
    Json numerics = {{"r_min", c_.r_min}, {"r_max", c_.r_max}};
    Json arr = Json::array();
    int solvable_max = c_.r_min - 1;
    std::string skipped;
    for (int r = c_.r_min; r <= c_.r_max; ++r) {
      try {
        check_level(q, r, opts.caps);
        solvable_max = r;
      } catch (const CapExceeded& e) {
        skipped = e.what();
        break;
      }
    }
    if (solvable_max >= c_.r_min) levels = sweep_levels(q, c_.r_min, solvable_max, opts, thread_count(c_));
    std::optional<int> first;
    bool monotone = true, sandwich = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& h : levels) {
      arr.push_back(to_json(h, c_.certificates));
      summary += "  " + level_line(h) + "\n";
      if (h.attained && !first) first = h.r;
      if (h.solver_status == sdp::Status::Optimal) {
        if (h.value > h.target + kAttainmentTolerance) sandwich = false;
        if (h.value < prev - 1e-7) monotone = false;
        prev = h.value;
      }
    }
    numerics["levels"] = arr;
    numerics["skipped"] = skipped.empty() ? Json(nullptr) : Json(skipped);
    numerics["min_attaining_level"] = first ? Json(*first) : Json(nullptr);
    numerics["upper_bound_ok"] = sandwich;
    numerics["monotone"] = monotone;
    doc["numerics"] = numerics;

    const Consistency cc = cross_check(v, levels);
    doc["consistency"] = {{"consistent", cc.consistent}, {"detail", cc.detail}};
    summary += first ? "first level attaining 1/alpha: " + std::to_string(*first) + "\n"
                     : std::string("no level attains 1/alpha within the range\n");
    summary += std::string("consistency: ") + (cc.consistent ? "ok" : "MISMATCH") + " (" + cc.detail + ")\n";
    emit(doc, summary);
  }

 private:
  Config c_;
  std::ostream& out_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Finite convergence of the Lasserre hierarchy for Motzkin-Straus programs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("-o,--output", c.output, "Write the JSON report to this file");
  app.add_flag("--json", c.json_stdout, "Print the JSON report instead of the summary");
  app.add_option("--format", c.format, "Graph format: dimacs, edgelist or json (default: from extension)");

  auto graph_arg = [&](CLI::App* sub) { sub->add_option("graph", c.graph_path, "Graph file")->required(); };
  auto form_args = [&](CLI::App* sub) {
    sub->add_option("--form", c.form, "Quadratic form: ms, ms-e or ms-B")
        ->check(CLI::IsMember({"ms", "ms-e", "ms-B"}));
    sub->add_option("--edge", c.edge, "Edge i,j for --form ms-e");
    sub->add_option("--B", c.b_path, "JSON file with edge values for --form ms-B");
  };
  auto solver_args = [&](CLI::App* sub) {
    sub->add_option("--gap", c.gap, "Relative duality gap tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--residual", c.residual, "Relative residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", c.max_iterations, "Solver iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--cap-r", c.cap_r, "Largest admissible level")->check(CLI::PositiveNumber);
    sub->add_option("--cap-basis", c.cap_basis, "Largest admissible total Gram basis size")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--direct", c.direct, "Solve the level program in all n variables");
  };

  auto* alpha = app.add_subcommand("alpha", "Stability number and a maximum stable set");
  graph_arg(alpha);
  alpha->add_flag("--oracle", c.oracle, "Also run the critical-edge oracle algorithm");
  auto* critical = app.add_subcommand("critical", "Critical edges and twin pairs");
  graph_arg(critical);
  auto* twins = app.add_subcommand("twins", "Twin pairs");
  graph_arg(twins);
  auto* contract = app.add_subcommand("contract", "Contract all twin pairs");
  graph_arg(contract);
  auto* decide = app.add_subcommand("decide", "Decide finite convergence");
  graph_arg(decide);
  form_args(decide);
  auto* level = app.add_subcommand("level", "Solve one level of the hierarchy");
  graph_arg(level);
  form_args(level);
  solver_args(level);
  level->add_option("--r", c.r, "Level")->required();
  level->add_option("--sdpa", c.sdpa_path, "Also write the SDP in SDPA sparse format");
  auto* sweep = app.add_subcommand("sweep", "Solve a range of levels");
  graph_arg(sweep);
  form_args(sweep);
  solver_args(sweep);
  sweep->add_option("--rmin", c.r_min, "First level");
  sweep->add_option("--rmax", c.r_max, "Last level")->required();
  sweep->add_option("--threads", c.threads, "Parallel solves (default: FINCON_THREADS or 1)");
  sweep->add_flag("--certificates", c.certificates, "Include certificates in the report");
  auto* certify = app.add_subcommand("certify", "Verify a certificate");
  graph_arg(certify);
  form_args(certify);
  certify->add_option("--cert", c.cert_path, "Certificate JSON")->required();
  auto* kkt = app.add_subcommand("kkt", "Optimality conditions at a point");
  graph_arg(kkt);
  form_args(kkt);
  kkt->add_option("--point", c.point_path, "Point JSON")->required();
  auto* bound = app.add_subcommand("bound", "Lower bound from the smallest eigenvalue");
  graph_arg(bound);
  form_args(bound);
  auto* lp = app.add_subcommand("lp", "Level one of a linear program");
  lp->add_option("problem", c.lp_path, "LP JSON {c, A, b, D, f}")->required();
  auto* report = app.add_subcommand("report", "Full pipeline report");
  graph_arg(report);
  form_args(report);
  solver_args(report);
  report->add_option("--rmin", c.r_min, "First level");
  report->add_option("--rmax", c.r_max, "Last level");
  report->add_option("--threads", c.threads, "Parallel solves (default: FINCON_THREADS or 1)");
  report->add_flag("--certificates", c.certificates, "Include certificates in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Runner runner(c, out);
    if (*alpha) runner.alpha_cmd();
    else if (*critical) runner.critical_cmd();
    else if (*twins) runner.twins_cmd();
    else if (*contract) runner.contract_cmd();
    else if (*decide) runner.decide_cmd();
    else if (*level) runner.level_cmd();
    else if (*sweep) runner.sweep_cmd();
    else if (*certify) runner.certify_cmd();
    else if (*kkt) runner.kkt_cmd();
    else if (*bound) runner.bound_cmd();
    else if (*lp) runner.lp_cmd();
    else if (*report) runner.report_cmd();
    return 0;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fincon::cli
