#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace fincon {

// Vertices are labeled 1..n throughout the library.
using Vertex = int;

// Unordered pair {u, v}, stored normalized with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
};

// Sorted, duplicate-free set of vertex labels.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> vs);
  explicit VertexSet(std::vector<Vertex> vs);

  const std::vector<Vertex>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(Vertex v) const;
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool operator==(const VertexSet&) const = default;
  auto operator<=>(const VertexSet&) const = default;

 private:
  std::vector<Vertex> items_;
};

// Simple undirected graph on vertices 1..n. Immutable: every mutation
// returns a new graph.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<Edge>& edges);

  int n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  // Lexicographically sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(Vertex a, Vertex b) const;
  bool has_edge(Edge e) const { return has_edge(e.u, e.v); }
  // Sorted neighbor labels of v.
  const std::vector<Vertex>& neighbors(Vertex v) const;
  int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<char> matrix_;  // n*n, row-major over 0-based labels
};

// Compact relabeling produced by vertex deletion. original[k-1] is the label
// (in the parent graph) of vertex k of the derived graph.
struct LabelMap {
  std::vector<Vertex> original;

  Vertex to_original(Vertex v) const { return original.at(v - 1); }
};

struct VertexDeletion {
  Graph graph;
  LabelMap labels;
};

Graph delete_edge(const Graph& g, Edge e);
Graph add_edge(const Graph& g, Edge e);
VertexDeletion delete_vertex(const Graph& g, Vertex v);

// Induced subgraph G[S] relabeled 1..|S| in increasing label order.
VertexDeletion induced_subgraph(const Graph& g, const VertexSet& s);

// Components in order of their smallest vertex.
std::vector<VertexSet> connected_components(const Graph& g);
// Components of G[S], reported in the labels of g.
std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s);

bool is_clique(const Graph& g, const VertexSet& s);

// Throws PreconditionError if some label of s is outside 1..n.
void check_in_range(const Graph& g, const VertexSet& s);

namespace graphs {

Graph complete(int n);
Graph cycle(int n);
Graph path(int n);
Graph empty(int n);
// Disjoint union; vertices of b are shifted by a.n().
Graph disjoint_union(const Graph& a, const Graph& b);

}  // namespace graphs

}  // namespace fincon
