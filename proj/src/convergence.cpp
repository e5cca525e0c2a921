#include "fincon/convergence.hpp"

#include "fincon/error.hpp"
#include "fincon/stability.hpp"

namespace fincon {

std::string to_string(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::FiniteConvergence: return "FiniteConvergence";
    case ConvergenceStatus::NoFiniteConvergence: return "NoFiniteConvergence";
    case ConvergenceStatus::UnknownByTheorem: return "UnknownByTheorem";
  }
  return "?";
}

std::string to_string(VerdictRule r) {
  switch (r) {
    case VerdictRule::TwinContraction: return "twin-contraction";
    case VerdictRule::SingleEdge: return "single-edge";
    case VerdictRule::CriticalEdgeValues: return "critical-edge-values";
  }
  return "?";
}

namespace {

std::string edge_text(Edge e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

}  // namespace

Verdict decide_ms(const Graph& g) {
  TwinContraction tc = contract_all_twins(g);
  Verdict v;
  v.rule = VerdictRule::TwinContraction;
  auto crit = critical_edges(tc.graph);
  if (crit.empty()) {
    v.status = ConvergenceStatus::FiniteConvergence;
    v.reason = "twin-contracted graph (" + std::to_string(tc.graph.n()) +
               " vertices) has no critical edge";
  } else {
    const Edge e = crit.front();
    v.status = ConvergenceStatus::NoFiniteConvergence;
    v.witness_edge = e;
    v.witness_edge_original = Edge(tc.labels.to_original(e.u), tc.labels.to_original(e.v));
    v.reason = "critical edge " + edge_text(e) + " survives twin contraction";
  }
  v.contracted = std::move(tc.graph);
  return v;
}

Verdict decide_ms_e(const Graph& g, Edge e) {
  if (!g.has_edge(e)) throw PreconditionError(edge_text(e) + " is not an edge");
  auto twins = twin_pairs(g);
  if (!twins.empty()) {
    std::string list;
    for (const auto& [a, b] : twins) list += (list.empty() ? "" : ", ") + edge_text(Edge(a, b));
    throw PreconditionError("the single-edge characterization needs a twin-free graph; twin pairs: " +
                            list);
  }
  Verdict v;
  v.rule = VerdictRule::SingleEdge;
  if (is_critical_edge(g, e)) {
    v.status = ConvergenceStatus::NoFiniteConvergence;
    v.witness_edge = v.witness_edge_original = e;
    v.reason = "edge " + edge_text(e) + " is critical";
  } else {
    v.status = ConvergenceStatus::FiniteConvergence;
    v.reason = "edge " + edge_text(e) + " is not critical";
  }
  return v;
}

Verdict decide_ms_B(const QuadForm& q) {
  const Graph& g = q.graph();
  if (!twin_pairs(g).empty()) {
    if (q.is_motzkin_straus()) return decide_ms(g);
    Verdict v;
    v.status = ConvergenceStatus::UnknownByTheorem;
    v.rule = VerdictRule::CriticalEdgeValues;
    v.reason = "graph has twin pairs and B differs from A_G + I; no characterization applies";
    return v;
  }
  Verdict v;
  v.rule = VerdictRule::CriticalEdgeValues;
  for (const Edge& e : critical_edges(g))
    if (q.edge_value(e) == 1) {
      v.status = ConvergenceStatus::NoFiniteConvergence;
      v.witness_edge = v.witness_edge_original = e;
      v.reason = "critical edge " + edge_text(e) + " has B value 1";
      return v;
    }
  v.status = ConvergenceStatus::FiniteConvergence;
  v.reason = "every critical edge has B value above 1";
  return v;
}

}  // namespace fincon
