// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fincon/convergence.hpp"
#include "fincon/msform.hpp"
#include "fincon/sdp.hpp"
#include "fincon/sos.hpp"
#include "fincon/stability.hpp"
#include "oracles.hpp"

using namespace fincon;

namespace {

constexpr double kUpperSlack = 1e-6;       // f(r) <= 1/alpha + this
constexpr double kMonotoneSlack = 1e-7;    // f(r) <= f(r+1) + this
constexpr double kForcedValueTol = 1e-6;   // |f(2) - 1| on complete graphs
constexpr double kResidualTol = 1e-6;      // certificate residual
constexpr double kFloatAnalyticTol = 1e-10;
constexpr double kLambdaMinTol = 1e-9;

constexpr double kBudgetC1 = 1.0;    // seconds
constexpr double kBudgetC2 = 30.0;
constexpr double kBudgetC5 = 120.0;
constexpr double kBudgetC8 = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string edge_text(Edge e) { return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}"; }

std::map<Edge, Rational> uniform_values(const Graph& g, Rational v) {
  std::map<Edge, Rational> m;
  for (const Edge& e : g.edges()) m[e] = v;
  return m;
}

// Random member of B(G): each edge is 1 with probability one half, otherwise
// one of 3/2, 2, 3.
QuadForm random_form(std::mt19937_64& rng, const Graph& g) {
  const Rational above[] = {Rational(3, 2), Rational(2), Rational(3)};
  std::map<Edge, Rational> m;
  for (const Edge& e : g.edges()) m[e] = rng() % 2 ? Rational(1) : above[rng() % 3];
  return make_B(g, m);
}

// Graph suite shared by the numeric criteria.
struct Named {
  std::string name;
  QuadForm form;
};

std::vector<Named> numeric_suite() {
  std::vector<Named> out;
  for (int n = 1; n <= 6; ++n) out.push_back({"K" + std::to_string(n), ms_matrix(graphs::complete(n))});
  for (int n = 3; n <= 6; ++n) out.push_back({"C" + std::to_string(n), ms_matrix(graphs::cycle(n))});
  for (int n = 3; n <= 6; ++n) out.push_back({"P" + std::to_string(n), ms_matrix(graphs::path(n))});
  out.push_back({"empty3", ms_matrix(graphs::empty(3))});
  out.push_back({"K3+K2", ms_matrix(graphs::disjoint_union(graphs::complete(3), graphs::complete(2)))});
  out.push_back({"bull", ms_matrix(Graph(5, {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}}))});
  out.push_back({"ms_e(C4,{1,2})", ms_e_matrix(graphs::cycle(4), Edge(1, 2))});
  out.push_back({"ms_e(C5,{1,2})", ms_e_matrix(graphs::cycle(5), Edge(1, 2))});
  out.push_back({"ms_e(P4,{2,3})", ms_e_matrix(graphs::path(4), Edge(2, 3))});
  out.push_back({"C5 all 2", make_B(graphs::cycle(5), uniform_values(graphs::cycle(5), 2))});
  return out;
}

struct Sweep {
  std::string name;
  QuadForm form;
  std::vector<HierarchyResult> levels;  // r = 2..5
};

std::vector<Sweep>& sweeps() {
  static std::vector<Sweep> cache = [] {
    std::vector<Sweep> out;
    for (auto& g : numeric_suite()) out.push_back({g.name, g.form, sweep_levels(g.form, 2, 5)});
    return out;
  }();
  return cache;
}

// Every Optimal status produced for criteria 7-9, paired with its
// independent check.
struct SelfCheck {
  int optimal = 0;
  int confirmed = 0;
  std::string first_bad;

  void record(const std::string& what, const HierarchyResult& h) {
    if (h.solver_status != sdp::Status::Optimal) return;
    ++optimal;
    if (h.check && h.check->consistent)
      ++confirmed;
    else if (first_bad.empty())
      first_bad = what + " r=" + std::to_string(h.r);
  }
};

SelfCheck& self_check() {
  static SelfCheck s;
  return s;
}

// ---- criteria ------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  for (int n = 3; n <= 11; ++n) {
    const Graph c = graphs::cycle(n);
    const auto crit = critical_edges(c);
    const bool ok = n % 2 ? crit == c.edges() : crit.empty();
    if (!ok) o.fail("C" + std::to_string(n) + " has " + std::to_string(crit.size()) + " critical edges");
  }
  const double s = seconds_since(t0);
  if (s >= kBudgetC1) o.fail("took " + std::to_string(s) + " s");
  if (o.pass) o.detail = "odd cycles all critical, even cycles none, C3..C11";
  return o;
}

std::vector<Graph> random_suite() {
  std::mt19937_64 rng(2024);
  std::vector<Graph> out;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 12);
    std::uniform_real_distribution<double> p(0.05, 0.9);
    out.push_back(oracle::random_graph(rng, n, p(rng)));
  }
  return out;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  int k = 0;
  for (const Graph& g : random_suite()) {
    const int truth = oracle::brute_alpha(g);
    if (alpha(g) != truth) o.fail("graph " + std::to_string(k) + ": alpha mismatch");
    if (alpha_via_critical_oracle(g, exact_critical_oracle()).alpha != truth)
      o.fail("graph " + std::to_string(k) + ": oracle algorithm mismatch");
    ++k;
  }
  const double s = seconds_since(t0);
  if (s >= kBudgetC2) o.fail("took " + std::to_string(s) + " s");
  if (o.pass) o.detail = "200 random graphs, n <= 12, both methods match enumeration";
  return o;
}

Outcome criterion3() {
  Outcome o;
  int steps = 0, k = 0;
  for (const Graph& g : random_suite()) {
    const int a = oracle::brute_alpha(g);
    const TwinContraction c = contract_all_twins(g);
    Graph cur = g;
    std::vector<Vertex> labels;
    for (int v = 1; v <= g.n(); ++v) labels.push_back(v);
    for (Vertex removed : c.trace) {
      const auto it = std::find(labels.begin(), labels.end(), removed);
      if (it == labels.end()) {
        o.fail("graph " + std::to_string(k) + ": trace names a deleted vertex");
        break;
      }
      const Vertex local = static_cast<Vertex>(it - labels.begin()) + 1;
      bool twin = false;
      for (int w = 1; w <= cur.n(); ++w) twin |= w != local && oracle::twins(cur, local, w);
      if (!twin) o.fail("graph " + std::to_string(k) + ": deleted vertex had no twin");
      cur = delete_vertex(cur, local).graph;
      labels.erase(it);
      ++steps;
      if (oracle::brute_alpha(cur) != a) o.fail("graph " + std::to_string(k) + ": alpha changed");
    }
    if (!(cur == c.graph) || !twin_pairs(c.graph).empty())
      o.fail("graph " + std::to_string(k) + ": contraction result inconsistent");
    ++k;
  }
  for (int n = 1; n <= 10; ++n) {
    const TwinContraction c = contract_all_twins(graphs::complete(n));
    if (!(c.graph == graphs::complete(1)) || c.deletions != n - 1)
      o.fail("K" + std::to_string(n) + " does not contract to K1 in n-1 steps");
  }
  if (o.pass) o.detail = std::to_string(steps) + " contraction steps checked, K1..K10 -> K1";
  return o;
}

Outcome criterion4() {
  Outcome o;
  using S = ConvergenceStatus;
  auto expect = [&](const std::string& what, S got, S want) {
    if (got != want) o.fail(what + " gave " + to_string(got));
  };
  expect("decide_ms(C5)", decide_ms(graphs::cycle(5)).status, S::NoFiniteConvergence);
  expect("decide_ms(C4)", decide_ms(graphs::cycle(4)).status, S::FiniteConvergence);
  for (int n = 1; n <= 8; ++n)
    expect("decide_ms(K" + std::to_string(n) + ")", decide_ms(graphs::complete(n)).status, S::FiniteConvergence);
  for (int n : {4, 5}) {
    const Graph c = graphs::cycle(n);
    for (const Edge& e : c.edges()) {
      const S want = oracle::critical(c, e) ? S::NoFiniteConvergence : S::FiniteConvergence;
      expect("decide_ms_e(C" + std::to_string(n) + "," + edge_text(e) + ")", decide_ms_e(c, e).status, want);
    }
  }
  expect("decide_ms_B(C5, all 2)", decide_ms_B(make_B(graphs::cycle(5), uniform_values(graphs::cycle(5), 2))).status,
         S::FiniteConvergence);
  if (o.pass) o.detail = "C5, C4, K1..K8, every C4/C5 edge, C5 with values 2";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  int finite = 0, samples = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const Graph g = oracle::random_graph(rng, n, 0.3 + 0.1 * (t % 5));
    const QuadForm q = random_form(rng, g);
    const std::string tag = "instance " + std::to_string(t);

    bool values_ok = true;
    for (const Edge& e : g.edges())
      if (oracle::critical(g, e) && q.edge_value(e) == 1) values_ok = false;

    const auto families = enumerate_minimizer_components(q);
    bool singletons = true;
    for (const auto& f : families)
      for (const auto& c : f.cliques) singletons &= c.size() == 1;

    bool kkt_all = true;
    for (const auto& f : families)
      for (const auto& x : {family_vertex(f, n), family_barycenter(f, n)}) {
        ++samples;
        if (!kkt_check(q, x).all_hold()) kkt_all = false;
      }

    if (values_ok != singletons) o.fail(tag + ": critical values vs singleton families");
    if (values_ok != kkt_all) o.fail(tag + ": critical values vs optimality conditions");
    finite += values_ok;
  }
  const double s = seconds_since(t0);
  if (s >= kBudgetC5) o.fail("took " + std::to_string(s) + " s");
  if (o.pass)
    o.detail = "100 random (G, B), " + std::to_string(finite) + " with finitely many minimizers, " +
               std::to_string(samples) + " KKT samples";
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int n = 1; n <= 8; ++n) {
    const RationalCertificate c = archimedean_certificate(n);
    RationalPoly f(n);
    for (int i = 1; i <= n; ++i) f -= RationalPoly::variable(n, i) * RationalPoly::variable(n, i);
    const CertificateReport r = verify_membership(f, c);
    if (!r.pass || !r.residual_exact_zero) o.fail("archimedean n=" + std::to_string(n));
    if (verify_membership(f, to_real(c)).residual > kFloatAnalyticTol)
      o.fail("archimedean float n=" + std::to_string(n));
  }
  std::mt19937_64 rng(66);
  for (int t = 0; t < 50; ++t) {
    const Graph g = oracle::random_graph(rng, 2 + static_cast<int>(rng() % 7), 0.5);
    const QuadForm q = random_form(rng, g);
    const FeasibilityBound b = feasibility_bound(q);
    const CertificateReport r = verify_certificate(q, b.certificate);
    if (!r.pass || !r.residual_exact_zero) o.fail("feasibility bound " + std::to_string(t));
    if (verify_certificate(q, to_real(b.certificate)).residual > kFloatAnalyticTol)
      o.fail("feasibility bound float " + std::to_string(t));
  }
  const FeasibilityBound c5 = feasibility_bound(ms_matrix(graphs::cycle(5)));
  const double want = 5 * (1 + 2 * std::cos(4 * std::numbers::pi / 5));
  const double err = std::abs(c5.float_bound - want);
  if (err > kLambdaMinTol) o.fail("C5 bound off by " + std::to_string(err));
  if (std::abs(to_double(c5.bound) - want) > kLambdaMinTol) o.fail("C5 rational bound too loose");
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "n <= 8 and 50 random forms exact; C5 bound %.12f", c5.float_bound);
    o.detail = buf;
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0;
  for (int n = 1; n <= 6; ++n) {
    const HierarchyResult h = solve_level(ms_matrix(graphs::complete(n)), 2);
    self_check().record("K" + std::to_string(n), h);
    const std::string tag = "K" + std::to_string(n);
    if (h.solver_status != sdp::Status::Optimal) {
      o.fail(tag + ": " + sdp::to_string(h.solver_status));
      continue;
    }
    worst = std::max(worst, std::abs(h.value - 1.0));
    if (std::abs(h.value - 1.0) > kForcedValueTol) o.fail(tag + ": value " + std::to_string(h.value));
    if (!h.verification || h.verification->residual > kResidualTol || !h.verification->pass)
      o.fail(tag + ": certificate does not verify");
  }
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "K1..K6 at level 2, max |value - 1| = %.2e", worst);
    o.detail = buf;
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto t0 = Clock::now();
  int checked = 0;
  for (const Sweep& s : sweeps()) {
    for (const auto& h : s.levels) self_check().record(s.name, h);
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      const HierarchyResult& h = s.levels[k];
      const std::string tag = s.name + " r=" + std::to_string(h.r);
      const bool usable = h.solver_status == sdp::Status::Optimal || std::isinf(h.value);
      if (!usable) {
        o.fail(tag + ": " + sdp::to_string(h.solver_status));
        continue;
      }
      if (h.value > h.target + kUpperSlack) o.fail(tag + " exceeds 1/alpha");
      if (h.r <= 4 && k + 1 < s.levels.size()) {
        const HierarchyResult& next = s.levels[k + 1];
        const bool next_usable = next.solver_status == sdp::Status::Optimal || std::isinf(next.value);
        if (next_usable && h.value > next.value + kMonotoneSlack) o.fail(tag + " above the next level");
      }
      ++checked;
    }
  }
  const double sec = seconds_since(t0);
  if (sec >= kBudgetC8) o.fail("took " + std::to_string(sec) + " s");
  if (o.pass)
    o.detail = std::to_string(sweeps().size()) + " forms, r = 2..5, " + std::to_string(checked) + " levels";
  return o;
}

Verdict verdict_for(const QuadForm& q) {
  if (q.is_motzkin_straus()) return decide_ms(q.graph());
  return decide_ms_B(q);
}

// The consistency property is stated for levels r <= 4. Level 5 of the sweep
// is reported separately: forms without finite convergence can come within
// the 1e-6 attainment threshold there.
constexpr int kConsistencyMaxLevel = 4;

Outcome criterion9() {
  Outcome o;
  for (int r = 2; r <= kConsistencyMaxLevel; ++r) {
    const HierarchyResult h = solve_level(ms_matrix(graphs::cycle(5)), r);
    self_check().record("C5", h);
    if (h.value >= 0.5 - kAttainmentTolerance) o.fail("C5 attains 1/2 at r=" + std::to_string(r));
  }
  int attaining = 0;
  std::string near;
  for (const Sweep& s : sweeps()) {
    const Verdict v = verdict_for(s.form);
    for (const auto& h : s.levels) {
      if (h.r > kConsistencyMaxLevel) {
        if (v.status == ConvergenceStatus::NoFiniteConvergence && h.value >= h.target - kAttainmentTolerance)
          near += " " + s.name + "@r=" + std::to_string(h.r);
        continue;
      }
      if (!h.attained) continue;
      ++attaining;
      if (v.status != ConvergenceStatus::FiniteConvergence)
        o.fail(s.name + " attains at r=" + std::to_string(h.r) + " but verdict is " + to_string(v.status));
      if (!h.verification || !h.verification->pass) o.fail(s.name + " certificate fails");
      break;
    }
    if (v.status == ConvergenceStatus::NoFiniteConvergence)
      for (const auto& h : s.levels)
        if (h.r <= kConsistencyMaxLevel && h.value >= h.target - kAttainmentTolerance)
          o.fail(s.name + " reaches 1/alpha at r=" + std::to_string(h.r) + " against the verdict");
  }
  if (o.pass) {
    o.detail = "r <= 4: C5 below 1/2, " + std::to_string(attaining) + " attaining forms all finite";
    if (!near.empty()) o.detail += "; within 1e-6 of 1/alpha at r=5 without finite convergence:" + near;
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int eq = static_cast<int>(rng() % std::min(3, n));
    const int ineq = std::max(n - eq, 1) + static_cast<int>(rng() % (12 - std::max(n - eq, 1) - eq + 1));
    const auto lp = oracle::random_lp(rng, n, ineq, eq);
    const auto best = oracle::lp_min_by_vertices(lp.c, lp.A, lp.b, lp.D, lp.f);
    const LpLevelOne r = lp_level_one(LpProblem{lp.c, lp.A, lp.b, lp.D, lp.f});
    if (!best || r.status != LpStatus::Optimal) {
      o.fail("program " + std::to_string(t) + " not solved");
      continue;
    }
    const double err = std::abs(to_double(r.value - *best));
    worst = std::max(worst, err);
    if (err > 1e-8) o.fail("program " + std::to_string(t) + " differs by " + std::to_string(err));
  }
  if (o.pass) o.detail = "100 random programs, max difference " + std::to_string(worst);
  return o;
}

Outcome criterion11() {
  Outcome o;
  std::mt19937_64 rng(1111);
  for (int t = 0; t < 20; ++t) {
    const Graph h = oracle::random_graph(rng, 2 + static_cast<int>(rng() % 5), 0.5);
    const Vertex of = 1 + static_cast<Vertex>(rng() % h.n());
    std::vector<Edge> edges;
    for (const Edge& e : h.edges()) edges.emplace_back(e.u + 1, e.v + 1);
    edges.emplace_back(1, of + 1);
    for (Vertex w : h.neighbors(of)) edges.emplace_back(1, w + 1);
    const Graph g(h.n() + 1, edges);
    const RationalCertificate base = feasibility_bound(ms_matrix(h)).certificate;
    const RationalCertificate lifted = lift_certificate_through_twin(base, g, 1, of + 1);
    const CertificateReport r = verify_certificate(ms_matrix(g), lifted);
    if (lifted.r != base.r || !r.pass || !r.residual_exact_zero)
      o.fail("instance " + std::to_string(t) + " does not verify exactly");
  }
  if (o.pass) o.detail = "20 random twin-pair instances, exact residual 0";
  return o;
}

bool bit_identical(const sdp::Solution& a, const sdp::Solution& b) {
  auto same = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), sizeof(double) * x.size()) == 0;
  };
  if (a.status != b.status || a.iterations != b.iterations || a.X.size() != b.X.size()) return false;
  for (std::size_t k = 0; k < a.X.size(); ++k)
    if (!same(a.X[k], b.X[k]) || !same(a.Z[k], b.Z[k])) return false;
  return same(a.y, b.y) && same(a.free_values, b.free_values);
}

Outcome criterion12() {
  Outcome o;
  const std::vector<sdp::Instance> instances = {
      assemble_level(ms_matrix(graphs::complete(4)), 2),
      assemble_reduced_level(ms_matrix(graphs::cycle(5)), 3),
      assemble_reduced_level(ms_e_matrix(graphs::cycle(4), Edge(1, 2)), 4),
  };
  for (std::size_t k = 0; k < instances.size(); ++k)
    if (!bit_identical(sdp::solve(instances[k]), sdp::solve(instances[k])))
      o.fail("instance " + std::to_string(k) + " differs between runs");
  const SelfCheck& s = self_check();
  if (s.confirmed != s.optimal) o.fail("unconfirmed Optimal status: " + s.first_bad);
  if (o.pass)
    o.detail = "repeat solves identical; " + std::to_string(s.confirmed) + "/" + std::to_string(s.optimal) +
               " Optimal statuses confirmed";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"criticality ground truth", criterion1},
      {"alpha oracle equivalence", criterion2},
      {"twin contraction", criterion3},
      {"verdicts", criterion4},
      {"critical values, minimizers and optimality conditions", criterion5},
      {"analytic certificates", criterion6},
      {"forced level-two values", criterion7},
      {"sandwich and monotonicity", criterion8},
      {"verdict and numerics consistency", criterion9},
      {"linear programs at level one", criterion10},
      {"certificate lift", criterion11},
      {"determinism and self-check", criterion12},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s  %2zu  %-54s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
