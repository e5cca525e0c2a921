#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fincon/graph.hpp"

namespace fincon {

bool is_stable(const Graph& g, const VertexSet& s);

// Exact stability number by branch and bound (branch on a maximum-degree
// vertex, prune with a greedy clique cover of the remaining candidates).
int alpha(const Graph& g);

// A maximum stable set; ties broken toward the branch that includes the
// branching vertex first.
VertexSet maximum_stable_set(const Graph& g);

// alpha(G \ e) == alpha(G) + 1.
bool is_critical_edge(const Graph& g, Edge e);
std::vector<Edge> critical_edges(const Graph& g);

using TwinPair = std::pair<Vertex, Vertex>;

// Pairs (i, j), i < j, {i,j} in E and N(i)\{j} == N(j)\{i}; lexicographic.
std::vector<TwinPair> twin_pairs(const Graph& g);
bool is_twin_pair(const Graph& g, Vertex i, Vertex j);

struct TwinContraction {
  Graph graph;
  int deletions = 0;
  // Deleted vertices in the labels of the input graph, in deletion order.
  std::vector<Vertex> trace;
  // Labels of the surviving vertices in the input graph.
  LabelMap labels;
};

// Repeatedly deletes the lower vertex of the lexicographically first twin
// pair until none is left.
TwinContraction contract_all_twins(const Graph& g);

struct CriticalReport {
  int alpha = 0;
  std::vector<Edge> critical_edges;
  std::vector<TwinPair> twin_pairs;
};

CriticalReport critical_report(const Graph& g);

// Answers "is e critical in g" for a twin-free g.
using CriticalEdgeOracle = std::function<bool(const Graph&, Edge)>;

CriticalEdgeOracle exact_critical_oracle();

struct OracleAlphaOptions {
  // Recompute alpha exactly after every step and throw OracleInconsistency
  // when alpha(current) != alpha(G) + criticals_found.
  bool check_invariant = false;
};

struct OracleAlphaRun {
  int alpha = 0;
  int oracle_calls = 0;
  int criticals_found = 0;
  int vertex_deletions = 0;
};

class OracleInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Computes alpha(G) with no stable-set search of its own: contract twins,
// ask the oracle about the lexicographically first edge, delete it, count the
// critical answers, repeat until edgeless. The result is
// (remaining vertices) - (critical answers).
OracleAlphaRun alpha_via_critical_oracle(const Graph& g, const CriticalEdgeOracle& oracle,
                                         OracleAlphaOptions options = {});

}  // namespace fincon
