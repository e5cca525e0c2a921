#pragma once

#include <optional>
#include <string>

#include "fincon/graph.hpp"
#include "fincon/msform.hpp"

namespace fincon {

enum class ConvergenceStatus { FiniteConvergence, NoFiniteConvergence, UnknownByTheorem };

std::string to_string(ConvergenceStatus s);

// Which characterization produced a verdict.
enum class VerdictRule {
  // Motzkin-Straus form: finite convergence iff the twin-contracted graph has
  // no critical edge.
  TwinContraction,
  // A_G + I + A_{G\e} on a twin-free graph: finite convergence iff e is not
  // critical.
  SingleEdge,
  // General B on a twin-free graph: finite convergence iff every critical
  // edge has B value > 1.
  CriticalEdgeValues,
};

std::string to_string(VerdictRule r);

struct Verdict {
  ConvergenceStatus status = ConvergenceStatus::UnknownByTheorem;
  VerdictRule rule = VerdictRule::CriticalEdgeValues;
  // Offending critical edge, in the labels of the graph that was tested.
  std::optional<Edge> witness_edge;
  // Same edge in the labels of the input graph (differs after contraction).
  std::optional<Edge> witness_edge_original;
  std::optional<Graph> contracted;
  std::string reason;
};

Verdict decide_ms(const Graph& g);
// Throws PreconditionError if g has twin pairs or e is not an edge.
Verdict decide_ms_e(const Graph& g, Edge e);
Verdict decide_ms_B(const QuadForm& q);

}  // namespace fincon
