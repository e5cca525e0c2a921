#include "fincon/stability.hpp"

#include <bit>
#include <cstdint>

#include "fincon/error.hpp"

namespace fincon {
namespace {

// Fixed-width vertex bitset over 0-based labels.
class Bits {
 public:
  explicit Bits(int n) : words_((n + 63) / 64, 0) {}

  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  int count_and(const Bits& o) const {
    int c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += std::popcount(words_[k] & o.words_[k]);
    return c;
  }
  Bits& and_with(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bits& and_not(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  // Lowest set index, or -1.
  int first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return static_cast<int>(k * 64) + std::countr_zero(words_[k]);
    return -1;
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        fn(static_cast<int>(k * 64) + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

class StableSetSearch {
 public:
  explicit StableSetSearch(const Graph& g) : n_(g.n()) {
    for (int v = 0; v < n_; ++v) {
      Bits nb(n_);
      for (Vertex w : g.neighbors(v + 1)) nb.set(w - 1);
      adj_.push_back(nb);
    }
  }

  std::vector<int> run() {
    Bits all(n_);
    for (int v = 0; v < n_; ++v) all.set(v);
    std::vector<int> current;
    search(all, current);
    return best_;
  }

 private:
  int clique_cover_bound(Bits rest) const {
    int cliques = 0;
    while (!rest.none()) {
      int v = rest.first();
      rest.reset(v);
      Bits cand = rest;
      cand.and_with(adj_[v]);
      while (!cand.none()) {
        int w = cand.first();
        rest.reset(w);
        cand.reset(w);
        cand.and_with(adj_[w]);
      }
      ++cliques;
    }
    return cliques;
  }

  void search(const Bits& cand, std::vector<int>& current) {
    const int size = static_cast<int>(current.size());
    if (cand.none()) {
      if (size > static_cast<int>(best_.size()) || best_.empty()) best_ = current;
      return;
    }
    if (size + clique_cover_bound(cand) <= static_cast<int>(best_.size())) return;

    int pivot = -1, pivot_deg = -1;
    cand.for_each([&](int v) {
      int d = cand.count_and(adj_[v]);
      if (d > pivot_deg) {
        pivot = v;
        pivot_deg = d;
      }
    });
    if (pivot_deg == 0) {
      std::vector<int> grown = current;
      cand.for_each([&](int v) { grown.push_back(v); });
      if (grown.size() > best_.size() || best_.empty()) best_ = std::move(grown);
      return;
    }

    Bits with = cand;
    with.and_not(adj_[pivot]);
    with.reset(pivot);
    current.push_back(pivot);
    search(with, current);
    current.pop_back();

    Bits without = cand;
    without.reset(pivot);
    search(without, current);
  }

  int n_;
  std::vector<Bits> adj_;
  std::vector<int> best_;
};

}  // namespace

bool is_stable(const Graph& g, const VertexSet& s) {
  check_in_range(g, s);
  const auto& v = s.items();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      if (g.has_edge(v[a], v[b])) return false;
  return true;
}

VertexSet maximum_stable_set(const Graph& g) {
  if (g.n() == 0) return {};
  std::vector<Vertex> out;
  for (int v : StableSetSearch(g).run()) out.push_back(v + 1);
  return VertexSet(std::move(out));
}

int alpha(const Graph& g) { return static_cast<int>(maximum_stable_set(g).size()); }

bool is_critical_edge(const Graph& g, Edge e) {
  Graph without = delete_edge(g, e);
  return alpha(without) == alpha(g) + 1;
}

std::vector<Edge> critical_edges(const Graph& g) {
  const int base = alpha(g);
  std::vector<Edge> out;
  for (const Edge& e : g.edges())
    if (alpha(delete_edge(g, e)) == base + 1) out.push_back(e);
  return out;
}

bool is_twin_pair(const Graph& g, Vertex i, Vertex j) {
  if (i == j || !g.has_edge(i, j)) return false;
  std::vector<Vertex> a, b;
  for (Vertex w : g.neighbors(i))
    if (w != j) a.push_back(w);
  for (Vertex w : g.neighbors(j))
    if (w != i) b.push_back(w);
  return a == b;
}

std::vector<TwinPair> twin_pairs(const Graph& g) {
  std::vector<TwinPair> out;
  for (const Edge& e : g.edges())
    if (is_twin_pair(g, e.u, e.v)) out.emplace_back(e.u, e.v);
  return out;
}

TwinContraction contract_all_twins(const Graph& g) {
  TwinContraction out{g, 0, {}, {}};
  for (int v = 1; v <= g.n(); ++v) out.labels.original.push_back(v);
  while (true) {
    auto twins = twin_pairs(out.graph);
    if (twins.empty()) break;
    const Vertex doomed = twins.front().first;
    out.trace.push_back(out.labels.to_original(doomed));
    VertexDeletion del = delete_vertex(out.graph, doomed);
    std::vector<Vertex> composed;
    for (Vertex v : del.labels.original) composed.push_back(out.labels.to_original(v));
    out.labels.original = std::move(composed);
    out.graph = std::move(del.graph);
    ++out.deletions;
  }
  return out;
}

CriticalReport critical_report(const Graph& g) {
  return {alpha(g), critical_edges(g), twin_pairs(g)};
}

CriticalEdgeOracle exact_critical_oracle() {
  return [](const Graph& g, Edge e) { return is_critical_edge(g, e); };
}

OracleAlphaRun alpha_via_critical_oracle(const Graph& g, const CriticalEdgeOracle& oracle,
                                         OracleAlphaOptions options) {
  OracleAlphaRun run;
  const int target = options.check_invariant ? alpha(g) : 0;
  auto check = [&](const Graph& current) {
    if (!options.check_invariant) return;
    const int now = alpha(current);
    if (now != target + run.criticals_found)
      throw OracleInconsistency("alpha of the reduced graph is " + std::to_string(now) +
                                " but alpha(G) + criticals found = " +
                                std::to_string(target + run.criticals_found));
  };

  Graph current = g;
  while (true) {
    TwinContraction contracted = contract_all_twins(current);
    run.vertex_deletions += contracted.deletions;
    current = std::move(contracted.graph);
    check(current);
    if (current.edge_count() == 0) break;
    const Edge e = current.edges().front();
    ++run.oracle_calls;
    if (oracle(current, e)) ++run.criticals_found;
    current = delete_edge(current, e);
    check(current);
  }
  run.alpha = current.n() - run.criticals_found;
  if (options.check_invariant && run.alpha != target)
    throw OracleInconsistency("oracle-derived alpha " + std::to_string(run.alpha) +
                              " differs from exact alpha " + std::to_string(target));
  return run;
}

}  // namespace fincon
