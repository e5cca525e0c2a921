#include "fincon/graph.hpp"

#include <algorithm>
#include <string>

#include "fincon/error.hpp"

namespace fincon {

VertexSet::VertexSet(std::initializer_list<Vertex> vs)
    : VertexSet(std::vector<Vertex>(vs)) {}

VertexSet::VertexSet(std::vector<Vertex> vs) : items_(std::move(vs)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(items_.begin(), items_.end(), v);
}

Graph::Graph(int n) : Graph(n, {}) {}

Graph::Graph(int n, const std::vector<Edge>& edges)
    : n_(n), adj_(static_cast<std::size_t>(n < 0 ? 0 : n)) {
  if (n < 0) throw PreconditionError("negative vertex count");
  matrix_.assign(static_cast<std::size_t>(n) * n, 0);
  for (const Edge& e : edges) {
    if (e.u < 1 || e.v > n)
      throw PreconditionError("edge {" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + "} has an endpoint outside 1.." +
                              std::to_string(n));
    if (e.u == e.v)
      throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
    char& cell = matrix_[static_cast<std::size_t>(e.u - 1) * n + (e.v - 1)];
    if (cell) continue;
    cell = 1;
    matrix_[static_cast<std::size_t>(e.v - 1) * n + (e.u - 1)] = 1;
    edges_.push_back(e);
    adj_[e.u - 1].push_back(e.v);
    adj_[e.v - 1].push_back(e.u);
  }
  std::sort(edges_.begin(), edges_.end());
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a < 1 || b < 1 || a > n_ || b > n_) return false;
  return matrix_[static_cast<std::size_t>(a - 1) * n_ + (b - 1)] != 0;
}

const std::vector<Vertex>& Graph::neighbors(Vertex v) const {
  if (v < 1 || v > n_)
    throw PreconditionError("vertex " + std::to_string(v) + " out of range 1.." +
                            std::to_string(n_));
  return adj_[v - 1];
}

void check_in_range(const Graph& g, const VertexSet& s) {
  for (Vertex v : s)
    if (v < 1 || v > g.n())
      throw PreconditionError("vertex " + std::to_string(v) + " out of range 1.." +
                              std::to_string(g.n()));
}

Graph delete_edge(const Graph& g, Edge e) {
  if (!g.has_edge(e))
    throw PreconditionError("{" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            "} is not an edge");
  std::vector<Edge> kept;
  kept.reserve(g.edge_count() - 1);
  for (const Edge& f : g.edges())
    if (f != e) kept.push_back(f);
  return Graph(g.n(), kept);
}

Graph add_edge(const Graph& g, Edge e) {
  std::vector<Edge> edges = g.edges();
  edges.push_back(e);
  return Graph(g.n(), edges);
}

VertexDeletion delete_vertex(const Graph& g, Vertex v) {
  if (v < 1 || v > g.n())
    throw PreconditionError("vertex " + std::to_string(v) + " out of range 1.." +
                            std::to_string(g.n()));
  std::vector<Vertex> keep;
  for (Vertex w = 1; w <= g.n(); ++w)
    if (w != v) keep.push_back(w);
  return induced_subgraph(g, VertexSet(keep));
}

VertexDeletion induced_subgraph(const Graph& g, const VertexSet& s) {
  check_in_range(g, s);
  std::vector<Vertex> relabel(static_cast<std::size_t>(g.n()) + 1, 0);
  int k = 0;
  for (Vertex v : s) relabel[v] = ++k;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (relabel[e.u] && relabel[e.v]) edges.emplace_back(relabel[e.u], relabel[e.v]);
  return {Graph(k, edges), LabelMap{s.items()}};
}

std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s) {
  check_in_range(g, s);
  std::vector<char> inside(static_cast<std::size_t>(g.n()) + 1, 0);
  for (Vertex v : s) inside[v] = 1;
  std::vector<char> seen(inside.size(), 0);
  std::vector<VertexSet> out;
  for (Vertex root : s) {
    if (seen[root]) continue;
    std::vector<Vertex> comp{root}, stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v))
        if (inside[w] && !seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
          stack.push_back(w);
        }
    }
    out.emplace_back(std::move(comp));
  }
  return out;
}

std::vector<VertexSet> connected_components(const Graph& g) {
  std::vector<Vertex> all(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) all[i] = i + 1;
  return connected_components(g, VertexSet(all));
}

bool is_clique(const Graph& g, const VertexSet& s) {
  check_in_range(g, s);
  const auto& v = s.items();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      if (!g.has_edge(v[a], v[b])) return false;
  return true;
}

namespace graphs {

Graph complete(int n) {
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
  return Graph(n, edges);
}

Graph cycle(int n) {
  if (n < 3) throw PreconditionError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i) edges.emplace_back(i, i % n + 1);
  return Graph(n, edges);
}

Graph path(int n) {
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph empty(int n) { return Graph(n); }

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  for (const Edge& e : b.edges()) edges.emplace_back(e.u + a.n(), e.v + a.n());
  return Graph(a.n() + b.n(), edges);
}

}  // namespace graphs

}  // namespace fincon
