#include "fincon/msform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "fincon/error.hpp"
#include "fincon/stability.hpp"

namespace fincon {

QuadForm make_B(const Graph& g, const std::map<Edge, Rational>& edge_values) {
  const int n = g.n();
  std::vector<Rational> entries(static_cast<std::size_t>(n) * n, Rational(0));
  for (int i = 0; i < n; ++i) entries[static_cast<std::size_t>(i) * n + i] = 1;
  for (const Edge& e : g.edges()) {
    entries[static_cast<std::size_t>(e.u - 1) * n + (e.v - 1)] = 1;
    entries[static_cast<std::size_t>(e.v - 1) * n + (e.u - 1)] = 1;
  }
  for (const auto& [e, value] : edge_values) {
    const std::string name = "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
    if (!g.has_edge(e))
      throw PreconditionError("value given for " + name + ", which is not an edge");
    if (value < 1)
      throw PreconditionError("edge " + name + " has value " + to_string(value) +
                              " < 1; B(G) requires B_ij >= 1 on edges");
    entries[static_cast<std::size_t>(e.u - 1) * n + (e.v - 1)] = value;
    entries[static_cast<std::size_t>(e.v - 1) * n + (e.u - 1)] = value;
  }
  return QuadForm(g, std::move(entries));
}

QuadForm ms_matrix(const Graph& g) { return make_B(g, {}); }

QuadForm ms_e_matrix(const Graph& g, Edge e) {
  if (!g.has_edge(e))
    throw PreconditionError("{" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            "} is not an edge");
  std::map<Edge, Rational> values;
  for (const Edge& f : g.edges()) values[f] = f == e ? 1 : 2;
  return make_B(g, values);
}

Eigen::MatrixXd QuadForm::dense() const {
  const int n = graph_.n();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries_[static_cast<std::size_t>(i) * n + j].get_d();
  return m;
}

bool QuadForm::is_motzkin_straus() const {
  for (const Edge& e : graph_.edges())
    if (edge_value(e) != 1) return false;
  return true;
}

template <typename T>
SimplexPoint<T>::SimplexPoint(std::vector<T> x) : x_(std::move(x)) {
  T sum(0);
  for (const T& v : x_) {
    if (v < 0) throw PreconditionError("simplex point has a negative coordinate");
    sum += v;
  }
  if constexpr (std::is_same_v<T, double>) {
    if (std::abs(sum - 1.0) > 1e-12)
      throw PreconditionError("simplex point coordinates sum to " + std::to_string(sum));
  } else {
    if (sum != 1) throw PreconditionError("simplex point coordinates sum to " + to_string(sum));
  }
}

template <typename T>
VertexSet SimplexPoint<T>::support() const {
  std::vector<Vertex> s;
  for (int i = 0; i < n(); ++i) {
    if constexpr (std::is_same_v<T, double>) {
      if (x_[i] > kActivityTolerance) s.push_back(i + 1);
    } else {
      if (x_[i] > 0) s.push_back(i + 1);
    }
  }
  return VertexSet(std::move(s));
}

template <typename T>
std::vector<double> SimplexPoint<T>::as_double() const {
  std::vector<double> out;
  for (const T& v : x_) out.push_back(to_double(v));
  return out;
}

template class SimplexPoint<Rational>;
template class SimplexPoint<double>;

namespace {

void check_dims(const QuadForm& q, int n) {
  if (q.n() != n)
    throw PreconditionError("point has " + std::to_string(n) + " coordinates, form has " +
                            std::to_string(q.n()));
}

}  // namespace

Rational objective(const QuadForm& q, const SimplexPoint<Rational>& x) {
  check_dims(q, x.n());
  Rational total = 0;
  for (int i = 1; i <= q.n(); ++i) {
    if (sgn(x(i)) == 0) continue;
    for (int j = 1; j <= q.n(); ++j) total += q.entry(i, j) * x(i) * x(j);
  }
  return total;
}

double objective(const QuadForm& q, const SimplexPoint<double>& x) {
  check_dims(q, x.n());
  Eigen::Map<const Eigen::VectorXd> v(x.values().data(), x.n());
  return v.dot(q.dense() * v);
}

SimplexPoint<Rational> stable_set_minimizer(const Graph& g, const VertexSet& s) {
  if (!is_stable(g, s)) throw PreconditionError("vertex set is not stable");
  const int a = alpha(g);
  if (static_cast<int>(s.size()) != a)
    throw PreconditionError("stable set has size " + std::to_string(s.size()) +
                            " but alpha(G) = " + std::to_string(a));
  std::vector<Rational> x(static_cast<std::size_t>(g.n()), Rational(0));
  for (Vertex v : s) x[v - 1] = Rational(1, a);
  return SimplexPoint<Rational>(std::move(x));
}

std::string to_string(MinimizerCheck::Failure f) {
  switch (f) {
    case MinimizerCheck::Failure::None: return "none";
    case MinimizerCheck::Failure::NonUnitSupportEdge: return "support edge with B value above 1";
    case MinimizerCheck::Failure::ComponentNotClique: return "support component is not a clique";
    case MinimizerCheck::Failure::ComponentMass: return "component mass differs from 1/alpha";
  }
  return "?";
}

template <typename T>
MinimizerCheck is_minimizer(const QuadForm& q, const SimplexPoint<T>& x) {
  check_dims(q, x.n());
  const Graph& g = q.graph();
  MinimizerCheck out;
  const VertexSet supp = x.support();
  out.components = connected_components(g, supp);

  for (const VertexSet& comp : out.components) {
    for (std::size_t a = 0; a < comp.size(); ++a)
      for (std::size_t b = a + 1; b < comp.size(); ++b) {
        const Edge e(comp.items()[a], comp.items()[b]);
        if (g.has_edge(e) && q.edge_value(e) != 1) {
          out.failure = MinimizerCheck::Failure::NonUnitSupportEdge;
          out.component = comp;
          out.edge = e;
          out.detail = "B value " + to_string(q.edge_value(e)) + " on support edge {" +
                       std::to_string(e.u) + "," + std::to_string(e.v) + "}";
          return out;
        }
      }
  }
  for (const VertexSet& comp : out.components)
    if (!is_clique(g, comp)) {
      out.failure = MinimizerCheck::Failure::ComponentNotClique;
      out.component = comp;
      out.detail = "component is not a clique";
      return out;
    }
  const int a = alpha(g);
  for (const VertexSet& comp : out.components) {
    T mass(0);
    for (Vertex v : comp) mass += x(v);
    bool ok;
    if constexpr (std::is_same_v<T, double>)
      ok = std::abs(mass - 1.0 / a) <= 1e-9;
    else
      ok = mass == Rational(1, a);
    if (!ok) {
      out.failure = MinimizerCheck::Failure::ComponentMass;
      out.component = comp;
      out.detail = "component mass " + std::to_string(to_double(mass)) + " but 1/alpha = " +
                   std::to_string(1.0 / a);
      return out;
    }
  }
  out.minimizer = true;
  return out;
}

template MinimizerCheck is_minimizer(const QuadForm&, const SimplexPoint<Rational>&);
template MinimizerCheck is_minimizer(const QuadForm&, const SimplexPoint<double>&);

std::vector<MinimizerFamily> enumerate_minimizer_components(const QuadForm& q,
                                                            std::size_t max_families) {
  const Graph& g = q.graph();
  const int n = g.n();
  if (n > 64) throw CapExceeded("minimizer enumeration supports at most 64 vertices");
  using Mask = std::uint64_t;
  auto bit = [](Vertex v) { return Mask{1} << (v - 1); };

  std::vector<Mask> closed(static_cast<std::size_t>(n) + 1, 0);
  for (Vertex v = 1; v <= n; ++v) {
    closed[v] = bit(v);
    for (Vertex w : g.neighbors(v)) closed[v] |= bit(w);
  }
  auto unit_edge = [&](Vertex a, Vertex b) { return g.has_edge(a, b) && q.entry(a, b) == 1; };

  // Cliques whose internal edges all carry value 1, in lexicographic order.
  struct Clique {
    std::vector<Vertex> vs;
    Mask mask = 0;
    Mask reach = 0;  // closed neighborhood
  };
  std::vector<Clique> cliques;
  std::vector<Vertex> cur;
  auto grow = [&](auto&& self) -> void {
    Clique c{cur, 0, 0};
    for (Vertex v : cur) {
      c.mask |= bit(v);
      c.reach |= closed[v];
    }
    cliques.push_back(c);
    for (Vertex w = cur.back() + 1; w <= n; ++w) {
      if (!std::all_of(cur.begin(), cur.end(), [&](Vertex v) { return unit_edge(v, w); })) continue;
      cur.push_back(w);
      self(self);
      cur.pop_back();
    }
  };
  for (Vertex v = 1; v <= n; ++v) {
    cur = {v};
    grow(grow);
  }

  const int a = alpha(g);
  std::vector<MinimizerFamily> out;
  std::vector<std::size_t> chosen;

  auto is_maximal = [&]() {
    Mask used = 0;
    for (auto k : chosen) used |= cliques[k].mask;
    for (Vertex v = 1; v <= n; ++v) {
      if (used & bit(v)) continue;
      for (auto k : chosen) {
        const Clique& c = cliques[k];
        bool joins = std::all_of(c.vs.begin(), c.vs.end(), [&](Vertex u) { return unit_edge(u, v); });
        if (!joins) continue;
        bool isolated = true;
        for (auto other : chosen)
          if (other != k && (closed[v] & cliques[other].mask)) isolated = false;
        if (isolated) return false;
      }
    }
    return true;
  };

  auto pick = [&](auto&& self, std::size_t start, Mask blocked) -> void {
    if (static_cast<int>(chosen.size()) == a) {
      if (!is_maximal()) return;
      if (out.size() >= max_families)
        throw CapExceeded("more than " + std::to_string(max_families) + " minimizer families");
      MinimizerFamily f;
      for (auto k : chosen) {
        f.cliques.emplace_back(cliques[k].vs);
        f.face_dimension += static_cast<int>(cliques[k].vs.size()) - 1;
      }
      out.push_back(std::move(f));
      return;
    }
    for (std::size_t k = start; k < cliques.size(); ++k) {
      const Clique& c = cliques[k];
      if (c.mask & blocked) continue;
      // Cliques are ordered by smallest vertex; later picks start strictly after.
      std::size_t next = k + 1;
      while (next < cliques.size() && cliques[next].vs.front() == c.vs.front()) ++next;
      chosen.push_back(k);
      self(self, next, blocked | c.reach);
      chosen.pop_back();
    }
  };
  if (a > 0) pick(pick, 0, 0);
  return out;
}

SimplexPoint<Rational> family_barycenter(const MinimizerFamily& f, int n) {
  const int a = static_cast<int>(f.cliques.size());
  std::vector<Rational> x(static_cast<std::size_t>(n), Rational(0));
  for (const VertexSet& c : f.cliques)
    for (Vertex v : c) x[v - 1] = Rational(1, a * static_cast<long>(c.size()));
  return SimplexPoint<Rational>(std::move(x));
}

SimplexPoint<Rational> family_vertex(const MinimizerFamily& f, int n) {
  const int a = static_cast<int>(f.cliques.size());
  std::vector<Rational> x(static_cast<std::size_t>(n), Rational(0));
  for (const VertexSet& c : f.cliques) x[c.items().front() - 1] = Rational(1, a);
  return SimplexPoint<Rational>(std::move(x));
}

}  // namespace fincon
