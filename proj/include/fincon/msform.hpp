#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fincon/graph.hpp"
#include "fincon/rational.hpp"

namespace fincon {

// Symmetric matrix B over the vertices of a graph with B_ii = 1,
// B_ij >= 1 on edges and B_ij = 0 on non-edges. Entries are exact.
class QuadForm {
 public:
  QuadForm() = default;
  const Graph& graph() const { return graph_; }
  int n() const { return graph_.n(); }
  // 1-based.
  const Rational& entry(Vertex i, Vertex j) const {
    return entries_[static_cast<std::size_t>(i - 1) * graph_.n() + (j - 1)];
  }
  const Rational& edge_value(Edge e) const { return entry(e.u, e.v); }
  Eigen::MatrixXd dense() const;
  // B == A_G + I.
  bool is_motzkin_straus() const;

  bool operator==(const QuadForm&) const = default;

 private:
  friend QuadForm make_B(const Graph&, const std::map<Edge, Rational>&);
  QuadForm(Graph g, std::vector<Rational> entries)
      : graph_(std::move(g)), entries_(std::move(entries)) {}

  Graph graph_;
  std::vector<Rational> entries_;
};

// Edges missing from the map take value 1. Throws PreconditionError for a
// value below 1 or a key that is not an edge.
QuadForm make_B(const Graph& g, const std::map<Edge, Rational>& edge_values);
// A_G + I.
QuadForm ms_matrix(const Graph& g);
// A_G + I + A_{G\e}: value 1 on e and 2 on every other edge.
QuadForm ms_e_matrix(const Graph& g, Edge e);

// Point of the standard simplex. Rational points are checked exactly; double
// points need x_i >= 0 and |sum - 1| <= 1e-12.
template <typename T>
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<T> x);

  int n() const { return static_cast<int>(x_.size()); }
  const std::vector<T>& values() const { return x_; }
  // 1-based.
  const T& operator()(Vertex i) const { return x_.at(i - 1); }
  // {i : x_i > 0}; for doubles, x_i > 1e-10.
  VertexSet support() const;
  std::vector<double> as_double() const;

 private:
  std::vector<T> x_;
};

extern template class SimplexPoint<Rational>;
extern template class SimplexPoint<double>;

inline constexpr double kActivityTolerance = 1e-10;

// x'Bx.
Rational objective(const QuadForm& q, const SimplexPoint<Rational>& x);
double objective(const QuadForm& q, const SimplexPoint<double>& x);

// (1/alpha) * chi^S for a maximum stable set S.
SimplexPoint<Rational> stable_set_minimizer(const Graph& g, const VertexSet& s);

struct MinimizerCheck {
  enum class Failure { None, NonUnitSupportEdge, ComponentNotClique, ComponentMass };

  bool minimizer = false;
  Failure failure = Failure::None;
  VertexSet component;          // offending component, if any
  std::optional<Edge> edge;     // offending edge for NonUnitSupportEdge
  std::vector<VertexSet> components;  // of G[supp(x)]
  std::string detail;
};

std::string to_string(MinimizerCheck::Failure f);

// Decides whether x minimizes x'Bx over the simplex from the structure of its
// support: every edge inside the support has B value 1, every component of
// G[supp x] is a clique of G, and each component carries mass 1/alpha(G).
// Double points compare masses with tolerance 1e-9.
template <typename T>
MinimizerCheck is_minimizer(const QuadForm& q, const SimplexPoint<T>& x);

struct MinimizerFamily {
  std::vector<VertexSet> cliques;  // sorted by smallest vertex
  int face_dimension = 0;          // sum of (|C| - 1)
};

// Every maximal family of alpha(G) disjoint, pairwise non-adjacent cliques
// whose internal edges all have B value 1. Each family spans a face of the
// minimizer set; there are finitely many minimizers iff every clique of every
// family is a single vertex. Throws CapExceeded past max_families.
std::vector<MinimizerFamily> enumerate_minimizer_components(const QuadForm& q,
                                                            std::size_t max_families = 1000000);

// Points of the face of a family: the barycenter (mass 1/alpha spread evenly
// inside each clique) and the vertex taking the smallest label of each clique.
SimplexPoint<Rational> family_barycenter(const MinimizerFamily& f, int n);
SimplexPoint<Rational> family_vertex(const MinimizerFamily& f, int n);

struct KktTolerances {
  double activity = 1e-10;     // x_j == 0
  double multiplier = 1e-8;    // mu_j > 0
  double curvature = 1e-8;     // projected Hessian eigenvalue > 0
  double stationarity = 1e-8;  // consistency of the multiplier system
};

struct KktReport {
  bool minimizer = false;       // global minimizer per is_minimizer
  bool cqc = false;
  bool scc = false;
  bool sosc = false;
  bool dual_feasible = false;   // all mu_j >= -tolerance
  double lambda = 0.0;          // multiplier of sum(x) - 1
  std::vector<double> mu;       // one per coordinate; 0 off the active set
  VertexSet active_set;
  int gradient_rank = 0;
  std::vector<double> projected_hessian_spectrum;
  double stationarity_residual = 0.0;
  std::string details;

  bool all_hold() const { return cqc && scc && sosc; }
};

// Classical optimality conditions at x for min x'Bx over the simplex with
// g_j(x) = x_j >= 0 and h(x) = sum(x) - 1 = 0. Throws PreconditionError when
// grad f(x) = lambda*1 + sum_{j active} mu_j e_j has no solution.
KktReport kkt_check(const QuadForm& q, const SimplexPoint<double>& x, KktTolerances tol = {});
KktReport kkt_check(const QuadForm& q, const SimplexPoint<Rational>& x, KktTolerances tol = {});

}  // namespace fincon
