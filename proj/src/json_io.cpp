#include "fincon/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fincon/error.hpp"
#include "fincon/graph_io.hpp"

namespace fincon {

Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // drop negative zero
  return r;
}

Json json_rational(const Rational& v) {
  if (v.get_den() == 1 && v.get_num().fits_slong_p()) return v.get_num().get_si();
  return to_string(v);
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return exact_rational(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error("expected a number or a rational string, got " + j.dump());
}

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) { return parse_graph(j.dump(), GraphFormat::Json); }

Json to_json(Edge e) { return {e.u, e.v}; }

Json to_json(const VertexSet& s) {
  Json out = Json::array();
  for (Vertex v : s) out.push_back(v);
  return out;
}

Json to_json(const CriticalReport& r) {
  Json crit = Json::array(), twins = Json::array();
  for (const Edge& e : r.critical_edges) crit.push_back(to_json(e));
  for (const auto& [a, b] : r.twin_pairs) twins.push_back({a, b});
  return {{"alpha", r.alpha}, {"critical_edges", crit}, {"twin_pairs", twins}};
}

Json to_json(const TwinContraction& c) {
  Json deleted = Json::array(), labels = Json::array();
  for (Vertex v : c.trace) deleted.push_back(v);
  for (Vertex v : c.labels.original) labels.push_back(v);
  return {{"graph", to_json(c.graph)}, {"deleted", deleted}, {"labels", labels}, {"steps", c.trace.size()}};
}

Json to_json(const OracleAlphaRun& r) {
  return {{"alpha", r.alpha},
          {"oracle_calls", r.oracle_calls},
          {"criticals_found", r.criticals_found},
          {"vertex_deletions", r.vertex_deletions}};
}

Json to_json(const QuadForm& q) {
  Json values = Json::array();
  for (const Edge& e : q.graph().edges()) values.push_back({e.u, e.v, json_rational(q.edge_value(e))});
  return {{"graph", to_json(q.graph())}, {"edge_values", values}};
}

QuadForm quadform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("graph")) throw Error("quadratic form needs a \"graph\" member");
  const Graph g = graph_from_json(j.at("graph"));
  std::map<Edge, Rational> values;
  if (j.contains("edge_values")) {
    for (const auto& row : j.at("edge_values")) {
      if (!row.is_array() || row.size() != 3) throw Error("edge value entries are [i, j, v]");
      const Edge e(row[0].get<int>(), row[1].get<int>());
      if (!values.emplace(e, rational_from_json(row[2])).second)
        throw Error("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} listed twice");
    }
  }
  return make_B(g, values);
}

Json to_json(const MinimizerCheck& c) {
  Json comps = Json::array();
  for (const auto& s : c.components) comps.push_back(to_json(s));
  Json out = {{"minimizer", c.minimizer}, {"failure", to_string(c.failure)}, {"components", comps}};
  if (!c.component.empty()) out["component"] = to_json(c.component);
  if (c.edge) out["edge"] = to_json(*c.edge);
  if (!c.detail.empty()) out["detail"] = c.detail;
  return out;
}

Json to_json(const KktReport& r) {
  Json mu = Json::array(), spec = Json::array();
  for (double v : r.mu) mu.push_back(json_number(v));
  for (double v : r.projected_hessian_spectrum) spec.push_back(json_number(v));
  return {{"cqc", r.cqc},
          {"scc", r.scc},
          {"sosc", r.sosc},
          {"all_hold", r.all_hold()},
          {"minimizer", r.minimizer},
          {"dual_feasible", r.dual_feasible},
          {"multipliers", {{"lambda", json_number(r.lambda)}, {"mu", mu}}},
          {"active_set", to_json(r.active_set)},
          {"gradient_rank", r.gradient_rank},
          {"projected_hessian_spectrum", spec},
          {"stationarity_residual", json_number(r.stationarity_residual)},
          {"details", r.details}};
}

Json to_json(const Verdict& v) {
  Json out = {{"status", to_string(v.status)}, {"theorem", to_string(v.rule)}};
  Json witness = Json::object();
  if (v.witness_edge) {
    witness["edge"] = to_json(*v.witness_edge);
    witness["edge_original_labels"] = to_json(*v.witness_edge_original);
  }
  if (v.contracted) witness["contracted_graph"] = to_json(*v.contracted);
  witness["reason"] = v.reason;
  out["witness"] = witness;
  return out;
}

namespace {

template <typename T>
Json coeff(const T& v);
template <>
Json coeff(const Rational& v) {
  return json_rational(v);
}
template <>
Json coeff(const double& v) {
  return json_number(v);
}

template <typename T>
Json matrix_json(const std::vector<T>& m, std::size_t d) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < d; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < d; ++j) row.push_back(coeff(m[i * d + j]));
    rows.push_back(row);
  }
  return rows;
}

template <typename T>
Json certificate_json(const SosCertificate<T>& c, bool exact) {
  const auto s0 = static_cast<std::size_t>(sigma0_basis_size(c.n, c.r));
  const auto s1 = static_cast<std::size_t>(sigma_basis_size(c.n, c.r));
  Json grams = Json::array();
  for (const auto& g : c.grams) grams.push_back(matrix_json(g, s1));
  Json q = Json::object();
  for (const auto& [m, v] : c.q.terms()) q[monomial_key(m)] = coeff(v);
  return {{"n", c.n},      {"r", c.r},         {"exact", exact},
          {"lambda", coeff(c.lambda)}, {"gram0", matrix_json(c.gram0, s0)}, {"grams", grams},
          {"q", q}};
}

// Accepts nested rows or a flat row-major list.
template <typename T, typename F>
std::vector<T> matrix_from_json(const Json& j, F convert) {
  std::vector<T> out;
  for (const auto& e : j) {
    if (e.is_array())
      for (const auto& v : e) out.push_back(convert(v));
    else
      out.push_back(convert(e));
  }
  return out;
}

template <typename T, typename F>
SosCertificate<T> certificate_parse(const Json& j, F convert) {
  SosCertificate<T> c;
  c.n = j.at("n").get<int>();
  c.r = j.at("r").get<int>();
  c.lambda = convert(j.at("lambda"));
  c.gram0 = matrix_from_json<T>(j.at("gram0"), convert);
  for (const auto& g : j.at("grams")) c.grams.push_back(matrix_from_json<T>(g, convert));
  c.q = Poly<T>(c.n);
  for (const auto& [key, v] : j.at("q").items()) c.q.add_term(parse_monomial_key(key, c.n), convert(v));
  return c;
}

}  // namespace

Json to_json(const RationalCertificate& c) { return certificate_json(c, true); }
Json to_json(const RealCertificate& c) { return certificate_json(c, false); }

std::variant<RationalCertificate, RealCertificate> certificate_from_json(const Json& j) {
  if (!j.is_object()) throw Error("certificate must be a JSON object");
  for (const char* key : {"n", "r", "lambda", "gram0", "grams", "q"})
    if (!j.contains(key)) throw Error(std::string("certificate is missing \"") + key + "\"");
  if (j.value("exact", false)) return certificate_parse<Rational>(j, rational_from_json);
  return certificate_parse<double>(j, [](const Json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
    if (!v.is_number()) throw Error("expected a number, got " + v.dump());
    return v.get<double>();
  });
}

Json to_json(const CertificateReport& r) {
  return {{"pass", r.pass},
          {"residual", json_number(r.residual)},
          {"residual_exact_zero", r.residual_exact_zero},
          {"grams_psd", r.grams_psd},
          {"min_gram_eigenvalue", json_number(r.min_gram_eigenvalue)},
          {"detail", r.detail}};
}

Json to_json(const sdp::CheckReport& r) {
  return {{"primal_objective", json_number(r.primal_objective)},
          {"dual_objective", json_number(r.dual_objective)},
          {"relative_gap", json_number(r.relative_gap)},
          {"max_primal_residual", json_number(r.max_primal_residual)},
          {"max_dual_residual", json_number(r.max_dual_residual)},
          {"min_primal_eigenvalue", json_number(r.min_primal_eigenvalue)},
          {"min_dual_eigenvalue", json_number(r.min_dual_eigenvalue)},
          {"meets_optimal_contract", r.meets_optimal_contract},
          {"consistent", r.consistent}};
}

Json to_json(const HierarchyResult& r, bool include_certificate) {
  Json out = {{"r", r.r},
              {"formulation", to_string(r.formulation)},
              {"status", sdp::to_string(r.solver_status)},
              {"value", json_number(r.value)},
              {"target", json_number(r.target)},
              {"gap", json_number(r.gap_to_target)},
              {"attained", r.attained},
              {"iterations", r.iterations},
              {"message", r.message}};
  out["verification"] = r.verification ? to_json(*r.verification) : Json(nullptr);
  out["check"] = r.check ? to_json(*r.check) : Json(nullptr);
  if (include_certificate) out["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  return out;
}

Json to_json(const FeasibilityBound& b) {
  return {{"psd", b.psd},
          {"mu", json_rational(b.mu)},
          {"bound", json_rational(b.bound)},
          {"lambda_min", json_number(b.lambda_min)},
          {"float_bound", json_number(b.float_bound)},
          {"certificate", to_json(b.certificate)}};
}

Json to_json(const LpLevelOne& r) {
  Json a = Json::array(), b = Json::array();
  for (const auto& v : r.alpha) a.push_back(json_rational(v));
  for (const auto& v : r.beta) b.push_back(json_rational(v));
  Json out = {{"status", to_string(r.status)}};
  out["value"] = r.status == LpStatus::Optimal ? json_rational(r.value) : Json(nullptr);
  out["alpha"] = a;
  out["beta"] = b;
  return out;
}

std::variant<SimplexPoint<Rational>, SimplexPoint<double>> point_from_json(const Json& j) {
  const Json& xs = j.is_object() ? j.at("x") : j;
  if (!xs.is_array() || xs.empty()) throw Error("a point is a non-empty array of coordinates");
  bool exact = true;
  for (const auto& v : xs) {
    if (v.is_string() || v.is_number_integer()) continue;
    if (!v.is_number()) throw Error("coordinate is not a number: " + v.dump());
    exact = false;
  }
  if (exact) {
    std::vector<Rational> x;
    for (const auto& v : xs) x.push_back(rational_from_json(v));
    return SimplexPoint<Rational>(std::move(x));
  }
  std::vector<double> x;
  for (const auto& v : xs) x.push_back(v.is_string() ? parse_rational(v.get<std::string>()).get_d() : v.get<double>());
  return SimplexPoint<double>(std::move(x));
}

}  // namespace fincon
