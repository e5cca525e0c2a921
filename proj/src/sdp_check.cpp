#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "fincon/error.hpp"
#include "fincon/sdp.hpp"

namespace fincon::sdp {

using Eigen::MatrixXd;

namespace {

double inner(const SparseSym& a, const MatrixXd& w) {
  double s = 0.0;
  for (const auto& e : a.entries)
    s += e.row == e.col ? e.value * w(e.row, e.row) : e.value * (w(e.row, e.col) + w(e.col, e.row));
  return s;
}

// Duplicate coordinates are summed so every SDPA line is unique.
std::map<std::pair<int, int>, double> merged(const SparseSym& s) {
  std::map<std::pair<int, int>, double> out;
  for (const auto& e : s.entries) out[{e.row, e.col}] += e.value;
  return out;
}

double min_eig(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

CheckReport check_solution(const Instance& inst, const Solution& sol) {
  inst.validate();
  const std::size_t nb = inst.block_dims.size();
  if (sol.X.size() != nb || sol.Z.size() != nb ||
      sol.y.size() != static_cast<Eigen::Index>(inst.constraints.size()) ||
      sol.free_values.size() != inst.free_dim)
    throw PreconditionError("solution dimensions do not match the instance");

  CheckReport rep;
  std::vector<MatrixXd> rd;
  for (std::size_t b = 0; b < nb; ++b) {
    const int d = inst.block_dims[b];
    MatrixXd c = inst.cost.empty() ? MatrixXd::Zero(d, d) : inst.cost[b].to_dense(d);
    rep.primal_objective += c.cwiseProduct(sol.X[b]).sum();
    rd.push_back(c - sol.Z[b]);
  }
  std::vector<double> rf(inst.free_dim, 0.0);
  for (int k = 0; k < inst.free_dim; ++k) {
    double ck = inst.free_cost.empty() ? 0.0 : inst.free_cost[k];
    rep.primal_objective += ck * sol.free_values(k);
    rf[k] = ck;
  }
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const auto& con = inst.constraints[i];
    const double yi = sol.y(static_cast<Eigen::Index>(i));
    rep.dual_objective += con.rhs * yi;
    double lhs = 0.0;
    for (const auto& [b, s] : con.blocks) {
      lhs += inner(s, sol.X[b]);
      for (const auto& e : s.entries) {
        rd[b](e.row, e.col) -= yi * e.value;
        if (e.row != e.col) rd[b](e.col, e.row) -= yi * e.value;
      }
    }
    for (const auto& [k, v] : con.free) {
      lhs += v * sol.free_values(k);
      rf[k] -= yi * v;
    }
    rep.max_primal_residual = std::max(rep.max_primal_residual, std::abs(con.rhs - lhs));
  }
  for (const auto& m : rd)
    if (m.size()) rep.max_dual_residual = std::max(rep.max_dual_residual, m.cwiseAbs().maxCoeff());
  for (double v : rf) rep.max_dual_residual = std::max(rep.max_dual_residual, std::abs(v));

  rep.min_primal_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_dual_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) {
    rep.min_primal_eigenvalue = std::min(rep.min_primal_eigenvalue, min_eig(sol.X[b]));
    rep.min_dual_eigenvalue = std::min(rep.min_dual_eigenvalue, min_eig(sol.Z[b]));
  }
  if (nb == 0) rep.min_primal_eigenvalue = rep.min_dual_eigenvalue = 0.0;

  rep.relative_gap = std::abs(rep.primal_objective - rep.dual_objective) /
                     (1.0 + std::abs(rep.primal_objective) + std::abs(rep.dual_objective));
  const double scale = 1.0 + std::abs(rep.primal_objective) + std::abs(rep.dual_objective);
  rep.meets_optimal_contract = rep.relative_gap <= 1e-7 && rep.max_primal_residual <= 1e-7 * scale &&
                               rep.max_dual_residual <= 1e-7 * scale &&
                               rep.min_primal_eigenvalue >= -1e-9;
  rep.consistent = sol.status == Status::Optimal ? rep.meets_optimal_contract : true;
  return rep;
}

std::string write_sdpa(const Instance& inst) {
  inst.validate();
  const int m = static_cast<int>(inst.constraints.size());
  const bool has_free = inst.free_dim > 0;
  const int nblocks = static_cast<int>(inst.block_dims.size()) + (has_free ? 1 : 0);
  const int free_block = static_cast<int>(inst.block_dims.size()) + 1;  // 1-based

  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "\"written by fincon: min -b'y s.t. C - sum y_i A_i PSD\"\n";
  out << m << " = mDIM\n";
  out << nblocks << " = nBLOCK\n";
  for (int d : inst.block_dims) out << d << ' ';
  if (has_free) out << -2 * inst.free_dim << ' ';
  out << "= bLOCKsTRUCT\n";
  for (int i = 0; i < m; ++i) out << (i ? " " : "") << num(-inst.constraints[i].rhs);
  out << '\n';

  // F_0 = -C; free column k puts (c_k, -c_k) on the diagonal block.
  for (std::size_t b = 0; b < inst.cost.size(); ++b)
    for (const auto& [rc, v] : merged(inst.cost[b]))
      if (v != 0.0)
        out << "0 " << b + 1 << ' ' << rc.first + 1 << ' ' << rc.second + 1 << ' ' << num(-v)
            << '\n';
  if (has_free)
    for (int k = 0; k < inst.free_dim; ++k) {
      double ck = inst.free_cost.empty() ? 0.0 : inst.free_cost[k];
      if (ck != 0.0) {
        out << "0 " << free_block << ' ' << 2 * k + 1 << ' ' << 2 * k + 1 << ' ' << num(ck) << '\n';
        out << "0 " << free_block << ' ' << 2 * k + 2 << ' ' << 2 * k + 2 << ' ' << num(-ck) << '\n';
      }
    }
  // F_i = -A_i; free coefficient a_ik gives (a_ik, -a_ik) on the diagonal block.
  for (int i = 0; i < m; ++i) {
    const auto& con = inst.constraints[i];
    for (const auto& [b, s] : con.blocks)
      for (const auto& [rc, v] : merged(s))
        if (v != 0.0)
          out << i + 1 << ' ' << b + 1 << ' ' << rc.first + 1 << ' ' << rc.second + 1 << ' '
              << num(-v) << '\n';
    std::map<int, double> free_row;
    for (const auto& [k, v] : con.free) free_row[k] += v;
    for (const auto& [k, v] : free_row)
      if (v != 0.0) {
        out << i + 1 << ' ' << free_block << ' ' << 2 * k + 1 << ' ' << 2 * k + 1 << ' ' << num(v)
            << '\n';
        out << i + 1 << ' ' << free_block << ' ' << 2 * k + 2 << ' ' << 2 * k + 2 << ' '
            << num(-v) << '\n';
      }
  }
  return out.str();
}

}  // namespace fincon::sdp
