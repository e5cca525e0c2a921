#include <vector>

#include "fincon/error.hpp"
#include "fincon/sos.hpp"

namespace fincon {

namespace {

struct StandardResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;
  Rational value;
};

// Dense tableau simplex for min c'x s.t. Mx = rhs, x >= 0, with Bland's
// rule in both phases.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_(rows + 1, std::vector<Rational>(cols + 1)) {}

  Rational& at(int i, int j) { return t_[i][j]; }
  Rational& rhs(int i) { return t_[i][cols_]; }
  Rational& obj(int j) { return t_[rows_][j]; }

  void pivot(int r, int c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      const Rational f = t_[i][c];
      for (int j = 0; j <= cols_; ++j)
        if (sgn(t_[r][j]) != 0) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // Returns false when the objective is unbounded below over `allowed`.
  bool optimize(const std::vector<char>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j)
        if (allowed[j] && sgn(t_[rows_][j]) < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < rows_; ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        Rational ratio = t_[i][cols_] / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  std::vector<int> basis_;
  int rows_, cols_;

 private:
  std::vector<std::vector<Rational>> t_;
};

StandardResult simplex(const std::vector<std::vector<Rational>>& M, const std::vector<Rational>& rhs,
                       const std::vector<Rational>& cost) {
  const int m = static_cast<int>(M.size());
  const int n = static_cast<int>(cost.size());
  StandardResult out;
  // Columns: original 0..n-1, artificial n..n+m-1.
  Tableau t(m, n + m);
  t.basis_.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    const int s = sgn(rhs[i]) < 0 ? -1 : 1;
    for (int j = 0; j < n; ++j) t.at(i, j) = s * M[i][j];
    t.at(i, n + i) = 1;
    t.rhs(i) = s * rhs[i];
    t.basis_[i] = n + i;
  }
  // Phase 1 objective: sum of artificials, expressed in nonbasic columns.
  for (int j = 0; j <= n + m; ++j) {
    Rational v = 0;
    if (j < n || j == n + m)
      for (int i = 0; i < m; ++i) v -= j == n + m ? t.rhs(i) : t.at(i, j);
    t.obj(j) = v;
  }
  std::vector<char> all(n + m, 1);
  t.optimize(all);
  if (sgn(t.obj(n + m)) != 0) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  // Drive artificials out of the basis; rows where that is impossible are redundant.
  std::vector<char> redundant(m, 0);
  for (int i = 0; i < m; ++i) {
    if (t.basis_[i] < n) continue;
    int c = -1;
    for (int j = 0; j < n && c < 0; ++j)
      if (sgn(t.at(i, j)) != 0) c = j;
    if (c >= 0)
      t.pivot(i, c);
    else
      redundant[i] = 1;
  }
  // Phase 2 objective.
  for (int j = 0; j <= n + m; ++j) t.obj(j) = j < n ? cost[j] : Rational(0);
  for (int i = 0; i < m; ++i) {
    if (redundant[i]) continue;
    const int b = t.basis_[i];
    const Rational f = t.obj(b);
    if (sgn(f) == 0) continue;
    for (int j = 0; j <= n + m; ++j) t.obj(j) -= f * (j == n + m ? t.rhs(i) : t.at(i, j));
  }
  std::vector<char> original(n + m, 0);
  for (int j = 0; j < n; ++j) original[j] = 1;
  if (!t.optimize(original)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.x.assign(n, Rational(0));
  for (int i = 0; i < m; ++i)
    if (!redundant[i] && t.basis_[i] < n) out.x[t.basis_[i]] = t.rhs(i);
  out.value = 0;
  for (int j = 0; j < n; ++j) out.value += cost[j] * out.x[j];
  return out;
}

}  // namespace

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

LpLevelOne lp_level_one(const LpProblem& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int p = static_cast<int>(lp.A.size());
  const int e = static_cast<int>(lp.D.size());
  if (static_cast<int>(lp.b.size()) != p || static_cast<int>(lp.f.size()) != e)
    throw PreconditionError("right-hand sides do not match the constraint rows");
  for (const auto& row : lp.A)
    if (static_cast<int>(row.size()) != n) throw PreconditionError("inequality row has the wrong length");
  for (const auto& row : lp.D)
    if (static_cast<int>(row.size()) != n) throw PreconditionError("equality row has the wrong length");

  // Variables (alpha, beta+, beta-) >= 0; rows A'alpha + D'beta = c.
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(p + 2 * e));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < p; ++i) M[k][i] = lp.A[i][k];
    for (int j = 0; j < e; ++j) {
      M[k][p + j] = lp.D[j][k];
      M[k][p + e + j] = -lp.D[j][k];
    }
  }
  std::vector<Rational> cost(p + 2 * e);
  for (int i = 0; i < p; ++i) cost[i] = -lp.b[i];
  for (int j = 0; j < e; ++j) {
    cost[p + j] = -lp.f[j];
    cost[p + e + j] = lp.f[j];
  }
  const StandardResult r = simplex(M, lp.c, cost);
  LpLevelOne out;
  out.status = r.status;
  if (r.status != LpStatus::Optimal) return out;
  out.value = -r.value;
  out.alpha.assign(r.x.begin(), r.x.begin() + p);
  for (int j = 0; j < e; ++j) out.beta.push_back(r.x[p + j] - r.x[p + e + j]);
  return out;
}

}  // namespace fincon
