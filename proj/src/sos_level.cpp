#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "fincon/error.hpp"
#include "fincon/sos.hpp"
#include "fincon/stability.hpp"

namespace fincon {

namespace {

std::size_t binomial(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}


std::vector<double> symmetric_dense(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = 0.5 * (m(i, j) + m(j, i));
  return out;
}

// Gram over monomial_basis(n - 1, d) re-indexed over monomial_basis(n, d);
// monomials of the smaller basis are the ones with x_n exponent 0.
std::vector<double> embed_gram(const std::vector<double>& g, int n, int d) {
  const auto small = monomial_basis(n - 1, d);
  const auto big = monomial_basis(n, d);
  std::map<Monomial, int, GradedLex> index;
  for (std::size_t j = 0; j < big.size(); ++j) index[big[j]] = static_cast<int>(j);
  std::vector<int> pos;
  for (const auto& m : small) {
    Monomial e = m;
    e.push_back(0);
    pos.push_back(index.at(e));
  }
  const std::size_t s = small.size(), b = big.size();
  std::vector<double> out(b * b, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) out[pos[i] * b + pos[j]] = g[i * s + j];
  return out;
}

}  // namespace

void check_level(const QuadForm& q, int r, const LevelCaps& caps) {
  const int n = q.n();
  if (n < 1) throw PreconditionError("the quadratic form has no variables");
  if (r < 2) throw PreconditionError("level must be at least 2, got " + std::to_string(r));
  const std::size_t s0 = binomial(n + r / 2, r / 2);
  const std::size_t s1 = binomial(n + (r - 1) / 2, (r - 1) / 2);
  const std::size_t total = s0 + static_cast<std::size_t>(n) * s1;
  const std::size_t rows = binomial(n + r, r);
  const std::string size = "n=" + std::to_string(n) + ", r=" + std::to_string(r) +
                           ": Gram basis total " + std::to_string(total) + ", " +
                           std::to_string(rows) + " equality constraints";
  if (r > caps.r_max)
    throw CapExceeded("level " + std::to_string(r) + " exceeds the cap " +
                      std::to_string(caps.r_max) + " (" + size + ")");
  if (total > static_cast<std::size_t>(caps.basis_cap))
    throw CapExceeded("problem too large for the basis cap " + std::to_string(caps.basis_cap) +
                      " (" + size + ")");
}

std::string to_string(Formulation f) {
  return f == Formulation::Reduced ? "reduced" : "direct";
}

sdp::Instance assemble_reduced_level(const QuadForm& q, int r, const LevelCaps& caps) {
  check_level(q, r, caps);
  const int n = q.n();
  const int m = n - 1;
  const auto rows = monomial_basis(m, r);
  const auto b0 = monomial_basis(m, r / 2);
  const auto b1 = monomial_basis(m, (r - 1) / 2);
  std::map<Monomial, int, GradedLex> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);

  sdp::Instance inst;
  inst.block_dims.push_back(static_cast<int>(b0.size()));
  for (int i = 0; i < n; ++i) inst.block_dims.push_back(static_cast<int>(b1.size()));
  inst.free_dim = 1;
  inst.cost.assign(inst.block_dims.size(), {});
  inst.free_cost = {-1.0};

  std::vector<std::map<int, sdp::SparseSym>> blocks(rows.size());
  auto put = [&](const Monomial& mono, int block, std::size_t k, std::size_t l, double v) {
    blocks[row_of.at(mono)][block].add(static_cast<int>(k), static_cast<int>(l), v);
  };
  for (std::size_t k = 0; k < b0.size(); ++k)
    for (std::size_t l = k; l < b0.size(); ++l) put(monomial_product(b0[k], b0[l]), 0, k, l, 1.0);
  for (std::size_t k = 0; k < b1.size(); ++k)
    for (std::size_t l = k; l < b1.size(); ++l) {
      const Monomial base = monomial_product(b1[k], b1[l]);
      put(base, n, k, l, 1.0);  // the constant of 1 - sum x'
      for (int i = 0; i < m; ++i) {
        Monomial xi = base;
        xi[i] += 1;
        put(xi, i + 1, k, l, 1.0);
        put(xi, n, k, l, -1.0);
      }
    }

  std::vector<RationalPoly> images;
  RationalPoly last = RationalPoly::constant(m, Rational(1));
  for (int i = 1; i <= m; ++i) {
    images.push_back(RationalPoly::variable(m, i));
    last -= RationalPoly::variable(m, i);
  }
  images.push_back(last);
  const RationalPoly f = objective_polynomial(q).compose(images);

  inst.constraints.resize(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    auto& con = inst.constraints[a];
    for (auto& [b, s] : blocks[a]) con.blocks.emplace_back(b, std::move(s));
    if (a == 0) con.free.emplace_back(0, 1.0);
    con.rhs = f.coefficient(rows[a]).get_d();
  }
  return inst;
}

RealCertificate decode_reduced_certificate(const QuadForm& q, int r, const sdp::Solution& sol) {
  const int n = q.n();
  if (sol.X.size() != static_cast<std::size_t>(n) + 1 || sol.free_values.size() != 1)
    throw PreconditionError("solution does not match the reduced level-" + std::to_string(r) +
                            " program");
  RealCertificate c;
  c.n = n;
  c.r = r;
  c.lambda = sol.free_values(0);
  c.gram0 = embed_gram(symmetric_dense(sol.X[0]), n, r / 2);
  for (int i = 1; i <= n; ++i) c.grams.push_back(embed_gram(symmetric_dense(sol.X[i]), n, (r - 1) / 2));

  // Defect D = f - lambda - s_0 - sum x_i s_i vanishes on sum x = 1 up to
  // solver error. Synthetic division in x_n by x_n - l(x'), l = 1 - sum x'.
  const auto b0 = monomial_basis(n, r / 2);
  const auto b1 = monomial_basis(n, (r - 1) / 2);
  RealPoly d = to_real(objective_polynomial(q)) - RealPoly::constant(n, c.lambda) -
               gram_polynomial<double>(n, b0, c.gram0);
  for (int i = 0; i < n; ++i) d -= RealPoly::variable(n, i + 1) * gram_polynomial<double>(n, b1, c.grams[i]);

  std::vector<RealPoly> layer(static_cast<std::size_t>(r) + 1, RealPoly(n));
  for (const auto& [mono, coef] : d.terms()) {
    Monomial base = mono;
    const int k = base[n - 1];
    base[n - 1] = 0;
    layer.at(k).add_term(base, coef);
  }
  RealPoly ell = RealPoly::constant(n, 1.0);
  for (int i = 1; i < n; ++i) ell -= RealPoly::variable(n, i);
  const RealPoly xn = RealPoly::variable(n, n);
  // q_{k-1} = D_k + l q_k, starting from q_{r-1} = D_r.
  std::vector<RealPoly> qk(static_cast<std::size_t>(r), RealPoly(n));
  qk[r - 1] = layer[r];
  for (int k = r - 1; k >= 1; --k) qk[k - 1] = layer[k] + ell * qk[k];
  c.q = RealPoly(n);
  RealPoly power = RealPoly::constant(n, 1.0);
  for (int k = 0; k < r; ++k) {
    c.q += qk[k] * power;
    power = power * xn;
  }
  return c;
}

sdp::Instance assemble_level(const QuadForm& q, int r, const LevelCaps& caps) {
  check_level(q, r, caps);
  const int n = q.n();
  const auto rows = monomial_basis(n, r);
  const auto b0 = monomial_basis(n, r / 2);
  const auto b1 = monomial_basis(n, (r - 1) / 2);
  const auto bq = monomial_basis(n, r - 1);
  std::map<Monomial, int, GradedLex> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);

  sdp::Instance inst;
  inst.block_dims.push_back(static_cast<int>(b0.size()));
  for (int i = 0; i < n; ++i) inst.block_dims.push_back(static_cast<int>(b1.size()));
  inst.free_dim = 1 + static_cast<int>(bq.size());
  inst.cost.assign(inst.block_dims.size(), {});
  inst.free_cost.assign(inst.free_dim, 0.0);
  inst.free_cost[0] = -1.0;

  std::vector<std::map<int, sdp::SparseSym>> blocks(rows.size());
  std::vector<std::map<int, double>> frees(rows.size());

  for (std::size_t k = 0; k < b0.size(); ++k)
    for (std::size_t l = k; l < b0.size(); ++l)
      blocks[row_of.at(monomial_product(b0[k], b0[l]))][0].add(static_cast<int>(k), static_cast<int>(l), 1.0);
  for (int i = 0; i < n; ++i) {
    Monomial xi(n, 0);
    xi[i] = 1;
    for (std::size_t k = 0; k < b1.size(); ++k)
      for (std::size_t l = k; l < b1.size(); ++l)
        blocks[row_of.at(monomial_product(xi, monomial_product(b1[k], b1[l])))][i + 1].add(
            static_cast<int>(k), static_cast<int>(l), 1.0);
  }
  frees[0][0] += 1.0;  // lambda on the constant monomial
  for (std::size_t j = 0; j < bq.size(); ++j) {
    const int var = 1 + static_cast<int>(j);
    frees[row_of.at(bq[j])][var] -= 1.0;
    for (int i = 0; i < n; ++i) {
      Monomial m = bq[j];
      m[i] += 1;
      frees[row_of.at(m)][var] += 1.0;
    }
  }

  const RationalPoly f = objective_polynomial(q);
  inst.constraints.resize(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    auto& con = inst.constraints[a];
    for (auto& [b, s] : blocks[a]) con.blocks.emplace_back(b, std::move(s));
    for (const auto& [k, v] : frees[a])
      if (v != 0.0) con.free.emplace_back(k, v);
    con.rhs = f.coefficient(rows[a]).get_d();
  }
  return inst;
}

RealCertificate decode_certificate(const QuadForm& q, int r, const sdp::Solution& sol) {
  const int n = q.n();
  const auto bq = monomial_basis(n, r - 1);
  if (sol.X.size() != static_cast<std::size_t>(n) + 1 ||
      sol.free_values.size() != 1 + static_cast<Eigen::Index>(bq.size()))
    throw PreconditionError("solution does not match the level-" + std::to_string(r) + " program");
  const auto dense = symmetric_dense;
  RealCertificate c;
  c.n = n;
  c.r = r;
  c.lambda = sol.free_values(0);
  c.gram0 = dense(sol.X[0]);
  for (int i = 1; i <= n; ++i) c.grams.push_back(dense(sol.X[i]));
  c.q = RealPoly(n);
  for (std::size_t j = 0; j < bq.size(); ++j) c.q.add_term(bq[j], sol.free_values(1 + static_cast<Eigen::Index>(j)));
  return c;
}

HierarchyResult solve_level(const QuadForm& q, int r, const LevelOptions& opts) {
  const bool reduced = opts.formulation == Formulation::Reduced;
  const sdp::Instance inst = reduced ? assemble_reduced_level(q, r, opts.caps) : assemble_level(q, r, opts.caps);
  HierarchyResult res;
  res.r = r;
  res.formulation = opts.formulation;
  res.target = 1.0 / alpha(q.graph());
  const sdp::Solution sol = sdp::solve(inst, opts.solver);
  res.solver_status = sol.status;
  res.iterations = sol.iterations;
  res.message = sol.message;
  switch (sol.status) {
    case sdp::Status::Optimal: {
      res.value = sol.free_values(0);
      res.certificate = reduced ? decode_reduced_certificate(q, r, sol) : decode_certificate(q, r, sol);
      res.verification = verify_certificate(q, *res.certificate);
      res.check = sdp::check_solution(inst, sol);
      res.attained = res.value >= res.target - kAttainmentTolerance && res.verification->pass;
      if (!res.verification->pass) res.message += "; extracted certificate fails verification";
      break;
    }
    case sdp::Status::InfeasibleSuspect:
      if (sol.primal_infeasible) {
        res.value = -std::numeric_limits<double>::infinity();
        res.message += "; no certificate exists at this level";
      } else {
        res.value = std::numeric_limits<double>::quiet_NaN();
      }
      break;
    default:
      res.value = std::numeric_limits<double>::quiet_NaN();
      break;
  }
  res.gap_to_target = res.target - res.value;
  return res;
}

std::vector<HierarchyResult> sweep_levels(const QuadForm& q, int r_min, int r_max,
                                          const LevelOptions& opts, int threads) {
  if (r_min > r_max) throw PreconditionError("empty level range");
  for (int r = r_min; r <= r_max; ++r) check_level(q, r, opts.caps);
  const int count = r_max - r_min + 1;
  std::vector<HierarchyResult> out(count);
  std::vector<std::exception_ptr> errors(count);
  int next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      int k;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= count) return;
        k = next++;
      }
      try {
        out[k] = solve_level(q, r_min + k, opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int nt = std::max(1, std::min(threads, count));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace fincon
