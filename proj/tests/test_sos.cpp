#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "fincon/error.hpp"
#include "fincon/msform.hpp"
#include "fincon/poly.hpp"
#include "fincon/sos.hpp"
#include "fincon/stability.hpp"
#include "oracles.hpp"

using namespace fincon;

namespace {

RationalPoly simplex_sum_plus_one(int n) {
  RationalPoly p = RationalPoly::constant(n, Rational(1));
  for (int i = 1; i <= n; ++i) p += RationalPoly::variable(n, i);
  return p;
}

// f - 1 = q (sum x - 1) with q = sum x + 1 and every Gram zero; valid
// whenever f = (sum x)^2, i.e. for complete graphs.
RationalCertificate complete_graph_certificate(int n) {
  RationalCertificate c;
  c.n = n;
  c.r = 2;
  c.lambda = 1;
  const int s0 = sigma0_basis_size(n, 2);
  const int s1 = sigma_basis_size(n, 2);
  c.gram0.assign(static_cast<std::size_t>(s0) * s0, Rational(0));
  c.grams.assign(n, std::vector<Rational>(static_cast<std::size_t>(s1) * s1, Rational(0)));
  c.q = simplex_sum_plus_one(n);
  return c;
}

// Adds vertex 1 as a twin of vertex `of` (in the labels of h shifted by one).
Graph with_twin(const Graph& h, Vertex of) {
  std::vector<Edge> edges;
  for (const Edge& e : h.edges()) edges.emplace_back(e.u + 1, e.v + 1);
  edges.emplace_back(1, of + 1);
  for (Vertex w : h.neighbors(of)) edges.emplace_back(1, w + 1);
  return Graph(h.n() + 1, edges);
}

}  // namespace

TEST_CASE("monomial bases") {
  CHECK(monomial_basis(2, 1) == std::vector<Monomial>{{0, 0}, {1, 0}, {0, 1}});
  CHECK(monomial_basis(3, 2).size() == 10);
  CHECK(monomial_basis(1, 3) == std::vector<Monomial>{{0}, {1}, {2}, {3}});
  for (int n = 1; n <= 5; ++n)
    for (int d = 0; d <= 4; ++d) {
      const auto basis = monomial_basis(n, d);
      long expect = 1;
      for (int k = 1; k <= d; ++k) expect = expect * (n + k) / k;
      CHECK(static_cast<long>(basis.size()) == expect);
      for (std::size_t k = 1; k < basis.size(); ++k) CHECK(GradedLex{}(basis[k - 1], basis[k]));
    }
}

TEST_CASE("polynomial arithmetic is exact") {
  const RationalPoly x = RationalPoly::variable(2, 1), y = RationalPoly::variable(2, 2);
  const RationalPoly p = (x + y) * (x - y);
  CHECK(p == x * x - y * y);
  CHECK(p.degree() == 2);
  CHECK((p - p).is_zero());
  CHECK(p.evaluate(std::vector<Rational>{Rational(1, 2), Rational(1, 3)}) == Rational(5, 36));
  const RationalPoly c = p.compose({x + y, y});
  CHECK(c == x * x + Rational(2) * x * y);
  CHECK(parse_monomial_key(monomial_key({2, 0, 1}), 3) == Monomial{2, 0, 1});
  CHECK_THROWS_AS(parse_monomial_key("1,2", 3), Error);
}

TEST_CASE("hand-built certificates") {
  const QuadForm k2 = ms_matrix(graphs::complete(2));
  const RationalCertificate cert = complete_graph_certificate(2);
  const CertificateReport exact = verify_certificate(k2, cert);
  CHECK(exact.pass);
  CHECK(exact.residual_exact_zero);
  CHECK(exact.residual == 0.0);

  const CertificateReport fl = verify_certificate(k2, to_real(cert));
  CHECK(fl.pass);
  CHECK(fl.residual == 0.0);

  RealCertificate bad = to_real(cert);
  bad.gram0[4] += 1.0;  // (x1, x1) entry
  const CertificateReport broken = verify_certificate(k2, bad);
  CHECK_FALSE(broken.pass);
  CHECK(broken.residual >= 0.5);

  RationalCertificate wrong_n = cert;
  wrong_n.n = 3;
  CHECK_THROWS_AS(verify_certificate(k2, wrong_n), PreconditionError);
}

TEST_CASE("archimedean certificates are exact") {
  for (int n = 1; n <= 6; ++n) {
    const RationalCertificate c = archimedean_certificate(n);
    CHECK(c.lambda == -n);
    RationalPoly f(n);
    for (int i = 1; i <= n; ++i) f -= RationalPoly::variable(n, i) * RationalPoly::variable(n, i);
    const CertificateReport r = verify_membership(f, c);
    CHECK(r.pass);
    CHECK(r.residual_exact_zero);
    CHECK(r.grams_psd);
  }
}

TEST_CASE("feasibility bounds") {
  const FeasibilityBound id = feasibility_bound(ms_matrix(graphs::empty(4)));
  CHECK(id.psd);
  CHECK(id.bound == 0);
  const FeasibilityBound k2 = feasibility_bound(ms_matrix(graphs::complete(2)));
  CHECK(k2.psd);
  CHECK(k2.bound == 0);
  CHECK(verify_certificate(ms_matrix(graphs::complete(2)), k2.certificate).residual_exact_zero);

  const QuadForm c5 = ms_matrix(graphs::cycle(5));
  const FeasibilityBound b = feasibility_bound(c5);
  const double mu = 1 + 2 * std::cos(4 * std::numbers::pi / 5);
  CHECK_FALSE(b.psd);
  CHECK(std::abs(b.float_bound - 5 * mu) <= 1e-9);
  CHECK(to_double(b.bound) <= 5 * mu);
  CHECK(to_double(b.bound) >= 5 * mu - 1e-9);
  const CertificateReport r = verify_certificate(c5, b.certificate);
  CHECK(r.pass);
  CHECK(r.residual_exact_zero);
  CHECK(b.certificate.lambda == b.bound);
}

TEST_CASE("feasibility bounds on random forms verify exactly") {
  std::mt19937_64 rng(41);
  const Rational values[] = {Rational(1), Rational(3, 2), Rational(2), Rational(5, 2)};
  for (int t = 0; t < 25; ++t) {
    const Graph g = oracle::random_graph(rng, 2 + t % 6, 0.5);
    std::map<Edge, Rational> m;
    for (const Edge& e : g.edges()) m[e] = values[rng() % 4];
    const QuadForm q = make_B(g, m);
    const FeasibilityBound b = feasibility_bound(q);
    const CertificateReport r = verify_certificate(q, b.certificate);
    CHECK(r.pass);
    CHECK(r.residual_exact_zero);
    CHECK(b.bound <= 0);
    CHECK(verify_certificate(q, to_real(b.certificate)).residual <= 1e-10);
  }
}

TEST_CASE("twin lifts") {
  RationalCertificate k1;
  k1.n = 1;
  k1.r = 2;
  k1.lambda = 1;
  k1.gram0.assign(4, Rational(0));
  k1.grams.assign(1, std::vector<Rational>(1, Rational(0)));
  k1.q = simplex_sum_plus_one(1);
  REQUIRE(verify_certificate(ms_matrix(graphs::complete(1)), k1).pass);
  const RationalCertificate k2 = lift_certificate_through_twin(k1, graphs::complete(2), 1, 2);
  CHECK(verify_certificate(ms_matrix(graphs::complete(2)), k2).residual_exact_zero);

  const RationalCertificate k3 = lift_certificate_through_twin(complete_graph_certificate(2), graphs::complete(3), 1, 2);
  const CertificateReport r = verify_certificate(ms_matrix(graphs::complete(3)), k3);
  CHECK(r.pass);
  CHECK(r.residual_exact_zero);
  CHECK(k3.lambda == 1);

  CHECK_THROWS_AS(lift_certificate_through_twin(archimedean_certificate(4), graphs::cycle(5), 1, 2),
                  PreconditionError);
  // Right shape, wrong polynomial.
  CHECK_THROWS_AS(lift_certificate_through_twin(archimedean_certificate(1), graphs::complete(2), 1, 2),
                  PreconditionError);
}

TEST_CASE("twin lifts of random exact certificates") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    const Graph h = oracle::random_graph(rng, 2 + t % 5, 0.5);
    const Vertex of = 1 + static_cast<Vertex>(rng() % h.n());
    const Graph g = with_twin(h, of);
    REQUIRE(is_twin_pair(g, 1, of + 1));
    const FeasibilityBound b = feasibility_bound(ms_matrix(h));
    const RationalCertificate lifted = lift_certificate_through_twin(b.certificate, g, 1, of + 1);
    CHECK(lifted.r == b.certificate.r);
    CHECK(lifted.lambda == b.certificate.lambda);
    CHECK(verify_certificate(ms_matrix(g), lifted).residual_exact_zero);
  }
}

TEST_CASE("level programs on complete graphs") {
  const sdp::Instance inst = assemble_level(ms_matrix(graphs::complete(2)), 2);
  const sdp::Solution sol = sdp::solve(inst);
  REQUIRE(sol.status == sdp::Status::Optimal);
  CHECK(-sol.primal_objective == doctest::Approx(1.0).epsilon(1e-7));

  const HierarchyResult k3 = solve_level(ms_matrix(graphs::complete(3)), 2);
  CHECK(k3.solver_status == sdp::Status::Optimal);
  CHECK(std::abs(k3.value - 1.0) <= 1e-6);
  CHECK(k3.attained);
  REQUIRE(k3.verification.has_value());
  CHECK(k3.verification->pass);

  LevelOptions direct;
  direct.formulation = Formulation::Direct;
  const HierarchyResult d = solve_level(ms_matrix(graphs::complete(3)), 2, direct);
  CHECK(std::abs(d.value - 1.0) <= 1e-6);
  CHECK(d.verification->pass);
}

TEST_CASE("levels of C5 stay below one half and increase") {
  const auto levels = sweep_levels(ms_matrix(graphs::cycle(5)), 2, 4);
  double prev = -INFINITY;
  for (const auto& h : levels) {
    CHECK(h.target == 0.5);
    if (h.solver_status != sdp::Status::Optimal) {
      CHECK(h.value == -INFINITY);
      continue;
    }
    CHECK(h.value <= 0.5 + 1e-6);
    CHECK(h.value >= prev - 1e-7);
    CHECK_FALSE(h.attained);
    CHECK(h.verification->pass);
    prev = h.value;
  }
  CHECK(levels[1].solver_status == sdp::Status::Optimal);
}

TEST_CASE("single-edge form on C4 attains one half") {
  const QuadForm q = ms_e_matrix(graphs::cycle(4), Edge(1, 2));
  std::optional<int> first;
  for (int r = 2; r <= 4 && !first; ++r)
    if (solve_level(q, r).attained) first = r;
  REQUIRE(first.has_value());
  CHECK(*first == 3);
}

TEST_CASE("parallel sweeps match serial ones") {
  const QuadForm q = ms_matrix(graphs::path(4));
  const auto a = sweep_levels(q, 2, 4, {}, 1);
  const auto b = sweep_levels(q, 2, 4, {}, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].r == b[k].r);
    CHECK(std::memcmp(&a[k].value, &b[k].value, sizeof(double)) == 0);
  }
}

TEST_CASE("level preconditions and caps") {
  const QuadForm q = ms_matrix(graphs::cycle(5));
  CHECK_THROWS_AS(assemble_level(q, 1), PreconditionError);
  CHECK_THROWS_AS(solve_level(q, 7), CapExceeded);
  LevelCaps small;
  small.basis_cap = 10;
  CHECK_THROWS_AS(assemble_level(q, 3, small), CapExceeded);
  try {
    check_level(q, 9);
  } catch (const CapExceeded& e) {
    CHECK(std::string(e.what()).find("Gram basis total") != std::string::npos);
  }
  CHECK_THROWS_AS(sweep_levels(q, 4, 3), PreconditionError);
}

TEST_CASE("linear programs at level one") {
  LpProblem one;
  one.c = {1};
  one.A = {{1}};
  one.b = {1};
  const LpLevelOne a = lp_level_one(one);
  CHECK(a.status == LpStatus::Optimal);
  CHECK(a.value == 1);
  CHECK(a.alpha == std::vector<Rational>{1});

  LpProblem two;
  two.c = {-1};
  two.A = {{1}};
  two.b = {0};
  two.D = {{1}};
  two.f = {1};
  CHECK(lp_level_one(two).value == -1);

  LpProblem unbounded;  // min -x s.t. x >= 0
  unbounded.c = {-1};
  unbounded.A = {{1}};
  unbounded.b = {0};
  CHECK(lp_level_one(unbounded).status == LpStatus::Infeasible);

  LpProblem empty;  // x >= 1, -x >= 0
  empty.c = {0};
  empty.A = {{1}, {-1}};
  empty.b = {1, 0};
  CHECK(lp_level_one(empty).status == LpStatus::Unbounded);
}

TEST_CASE("level one equals the primal optimum on random programs") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 5;
    const int eq = static_cast<int>(rng() % 2);
    const auto lp = oracle::random_lp(rng, n, n + 1 + static_cast<int>(rng() % 3), std::min(eq, n - 1));
    const auto best = oracle::lp_min_by_vertices(lp.c, lp.A, lp.b, lp.D, lp.f);
    REQUIRE(best.has_value());
    LpProblem p{lp.c, lp.A, lp.b, lp.D, lp.f};
    const LpLevelOne r = lp_level_one(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == *best);
    for (const auto& a : r.alpha) CHECK(a >= 0);
  }
}
