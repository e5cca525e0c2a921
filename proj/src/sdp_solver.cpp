#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include "fincon/error.hpp"
#include "fincon/sdp.hpp"

namespace fincon::sdp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void SparseSym::add(int row, int col, double value) {
  if (row > col) std::swap(row, col);
  entries.push_back({row, col, value});
}

SparseSym SparseSym::from_dense(const MatrixXd& m) {
  if (m.rows() != m.cols()) throw PreconditionError("matrix is not square");
  SparseSym out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) {
      if (m(i, j) != m(j, i)) throw PreconditionError("matrix is not symmetric");
      if (m(i, j) != 0.0) out.entries.push_back({i, j, m(i, j)});
    }
  return out;
}

MatrixXd SparseSym::to_dense(int dim) const {
  MatrixXd m = MatrixXd::Zero(dim, dim);
  for (const auto& e : entries) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

int Instance::total_block_dim() const {
  int total = 0;
  for (int d : block_dims) total += d;
  return total;
}

void Instance::validate() const {
  auto check_sym = [&](const SparseSym& s, int block) {
    for (const auto& e : s.entries) {
      if (e.row > e.col)
        throw PreconditionError("lower-triangular entry in block " + std::to_string(block) +
                                "; store the upper triangle");
      if (e.row < 0 || e.col >= block_dims[block])
        throw PreconditionError("entry outside block " + std::to_string(block));
    }
  };
  for (int d : block_dims)
    if (d <= 0) throw PreconditionError("block dimension must be positive");
  if (free_dim < 0) throw PreconditionError("negative free dimension");
  if (constraints.empty()) throw PreconditionError("instance has no constraints");
  if (!cost.empty() && cost.size() != block_dims.size())
    throw PreconditionError("cost has " + std::to_string(cost.size()) + " blocks, expected " +
                            std::to_string(block_dims.size()));
  if (!free_cost.empty() && static_cast<int>(free_cost.size()) != free_dim)
    throw PreconditionError("free cost length does not match free dimension");
  for (std::size_t b = 0; b < cost.size(); ++b) check_sym(cost[b], static_cast<int>(b));
  for (const auto& c : constraints) {
    for (const auto& [b, s] : c.blocks) {
      if (b < 0 || b >= static_cast<int>(block_dims.size()))
        throw PreconditionError("constraint references missing block " + std::to_string(b));
      check_sym(s, b);
    }
    for (const auto& [k, v] : c.free)
      if (k < 0 || k >= free_dim)
        throw PreconditionError("constraint references missing free variable " +
                                std::to_string(k));
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::MaxIter: return "MaxIter";
    case Status::InfeasibleSuspect: return "Infeasible-suspect";
    case Status::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

namespace {

// Gap and residual bound promised by the Optimal status.
constexpr double kContractTolerance = 1e-7;

std::string format_tolerance(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double inner(const SparseSym& a, const MatrixXd& w) {
  double s = 0.0;
  for (const auto& e : a.entries)
    s += e.row == e.col ? e.value * w(e.row, e.row) : e.value * (w(e.row, e.col) + w(e.col, e.row));
  return s;
}

void add_scaled(MatrixXd& out, const SparseSym& a, double scale) {
  for (const auto& e : a.entries) {
    out(e.row, e.col) += scale * e.value;
    if (e.row != e.col) out(e.col, e.row) += scale * e.value;
  }
}

double min_eigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Largest step t with m + t*dm PSD (infinity when unbounded).
double max_step(const MatrixXd& m, const MatrixXd& dm, bool& ok) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    ok = false;
    return 0.0;
  }
  MatrixXd t = llt.matrixL().solve(dm);
  t = llt.matrixL().solve(t.transpose().eval());
  t = 0.5 * (t + t.transpose()).eval();
  double lmin = min_eigenvalue(t);
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

class Solver {
 public:
  Solver(const Instance& inst, const Options& opts, bool orthogonal)
      : inst_(inst), opts_(opts), orthogonal_(orthogonal) {
    inst.validate();
    nb_ = static_cast<int>(inst.block_dims.size());
    m_ = static_cast<int>(inst.constraints.size());
    nf_ = inst.free_dim;
    by_block_.resize(nb_);
    b_.resize(m_);
    Af_ = MatrixXd::Zero(m_, nf_);
    for (int i = 0; i < m_; ++i) {
      const auto& c = inst.constraints[i];
      b_(i) = c.rhs;
      for (const auto& [blk, s] : c.blocks) by_block_[blk].push_back({i, &s});
      for (const auto& [k, v] : c.free) Af_(i, k) += v;
    }
    cf_ = VectorXd::Zero(nf_);
    for (int k = 0; k < static_cast<int>(inst.free_cost.size()); ++k) cf_(k) = inst.free_cost[k];
    for (int blk = 0; blk < nb_; ++blk) {
      const int d = inst.block_dims[blk];
      C_.push_back(inst.cost.empty() ? MatrixXd::Zero(d, d) : inst.cost[blk].to_dense(d));
    }
    total_dim_ = inst.total_block_dim();
  }

  Solution run();
  // The result is an earlier iterate that met the Optimal contract but not
  // the requested tolerances.
  bool relaxed() const { return relaxed_; }

 private:
  struct Term {
    int con;
    const SparseSym* mat;
  };

  VectorXd apply_A(const std::vector<MatrixXd>& w) const {
    VectorXd out = VectorXd::Zero(m_);
    for (int blk = 0; blk < nb_; ++blk)
      for (const auto& t : by_block_[blk]) out(t.con) += inner(*t.mat, w[blk]);
    return out;
  }

  std::vector<MatrixXd> adjoint(const VectorXd& y) const {
    std::vector<MatrixXd> out;
    for (int blk = 0; blk < nb_; ++blk) {
      const int d = inst_.block_dims[blk];
      MatrixXd acc = MatrixXd::Zero(d, d);
      for (const auto& t : by_block_[blk]) add_scaled(acc, *t.mat, y(t.con));
      out.push_back(std::move(acc));
    }
    return out;
  }

  // M_ij = sum_blocks <A_i, X A_j Zinv>.
  MatrixXd schur(const std::vector<MatrixXd>& X, const std::vector<MatrixXd>& Zinv) const {
    MatrixXd M = MatrixXd::Zero(m_, m_);
    for (int blk = 0; blk < nb_; ++blk) {
      const int d = inst_.block_dims[blk];
      const MatrixXd& x = X[blk];
      const MatrixXd& zi = Zinv[blk];
      MatrixXd g(d, d);
      for (const auto& tj : by_block_[blk]) {
        g.setZero();
        for (const auto& e : tj.mat->entries) {
          g.noalias() += e.value * x.col(e.row) * zi.row(e.col);
          if (e.row != e.col) g.noalias() += e.value * x.col(e.col) * zi.row(e.row);
        }
        for (const auto& ti : by_block_[blk]) M(ti.con, tj.con) += inner(*ti.mat, g);
      }
    }
    return 0.5 * (M + M.transpose());
  }

  // With X = Lx Lx' and Z = Lz Lz', M_ij = <A_i, X A_j Zinv> = <G_i, G_j> for
  // G_i = Lz^{-1} A_i Lx. Returns G' with one column per constraint.
  MatrixXd schur_factor(const std::vector<MatrixXd>& X, const std::vector<MatrixXd>& Z, bool& ok) const {
    Eigen::Index rows = 0;
    for (int blk = 0; blk < nb_; ++blk) rows += static_cast<Eigen::Index>(inst_.block_dims[blk]) * inst_.block_dims[blk];
    MatrixXd Gt = MatrixXd::Zero(rows, m_);
    Eigen::Index offset = 0;
    ok = true;
    for (int blk = 0; blk < nb_; ++blk) {
      const int d = inst_.block_dims[blk];
      Eigen::LLT<MatrixXd> lx(X[blk]), lz(Z[blk]);
      if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) {
        ok = false;
        return Gt;
      }
      const MatrixXd Lx = lx.matrixL();
      const MatrixXd LzInv = lz.matrixL().solve(MatrixXd::Identity(d, d));
      MatrixXd g(d, d);
      for (const auto& t : by_block_[blk]) {
        g.setZero();
        for (const auto& e : t.mat->entries) {
          g.noalias() += e.value * LzInv.col(e.row) * Lx.row(e.col);
          if (e.row != e.col) g.noalias() += e.value * LzInv.col(e.col) * Lx.row(e.row);
        }
        Gt.col(t.con).segment(offset, g.size()) += Eigen::Map<const VectorXd>(g.data(), g.size());
      }
      offset += g.size();
    }
    return Gt;
  }

  static double frob(const std::vector<MatrixXd>& ms) {
    double s = 0.0;
    for (const auto& m : ms) s += m.squaredNorm();
    return std::sqrt(s);
  }

  const Instance& inst_;
  Options opts_;
  bool orthogonal_ = false;
  bool relaxed_ = false;
  int nb_ = 0, m_ = 0, nf_ = 0, total_dim_ = 0;
  std::vector<std::vector<Term>> by_block_;
  std::vector<MatrixXd> C_;
  VectorXd b_, cf_;
  MatrixXd Af_;
};

Solution Solver::run() {
  Solution sol;
  const double norm_b = b_.norm();
  const double norm_c = std::sqrt(frob(C_) * frob(C_) + cf_.squaredNorm());

  // Starting point scaled to the data, as in common infeasible-start codes.
  std::vector<MatrixXd> X, Z;
  for (int blk = 0; blk < nb_; ++blk) {
    const int d = inst_.block_dims[blk];
    double xi = std::max(10.0, std::sqrt(static_cast<double>(d)));
    double eta = std::max({10.0, std::sqrt(static_cast<double>(d)), C_[blk].norm()});
    for (const auto& t : by_block_[blk]) {
      double na = t.mat->to_dense(d).norm();
      xi = std::max(xi, d * (1.0 + std::abs(b_(t.con))) / (1.0 + na));
      eta = std::max(eta, na);
    }
    X.push_back(xi * MatrixXd::Identity(d, d));
    Z.push_back(eta * MatrixXd::Identity(d, d));
  }
  VectorXd y = VectorXd::Zero(m_);
  VectorXd xf = VectorXd::Zero(nf_);

  // Last iterate meeting the Optimal contract; returned if the run later
  // breaks down before reaching the requested tolerances.
  std::optional<Solution> fallback;
  const double contract_gap = 0.5 * std::max(opts_.gap_tolerance, kContractTolerance);
  const double contract_res = 0.5 * std::max(opts_.residual_tolerance, kContractTolerance);

  auto finish = [&](Status st, std::string msg) {
    if (st != Status::Optimal && st != Status::InfeasibleSuspect && fallback) {
      relaxed_ = true;
      Solution best = *fallback;
      best.iterations = sol.iterations;
      best.message = "converged to " + format_tolerance(kContractTolerance) + " before: " + msg;
      return best;
    }
    sol.status = st;
    sol.message = std::move(msg);
    sol.X = X;
    sol.Z = Z;
    sol.y = y;
    sol.free_values = xf;
    return sol;
  };

  for (int iter = 0; iter <= opts_.max_iterations; ++iter) {
    sol.iterations = iter;
    const VectorXd rp = b_ - apply_A(X) - Af_ * xf;
    std::vector<MatrixXd> Rd = adjoint(y);
    for (int blk = 0; blk < nb_; ++blk) Rd[blk] = C_[blk] - Rd[blk] - Z[blk];
    const VectorXd rf = cf_ - Af_.transpose() * y;

    double pobj = xf.dot(cf_), dobj = b_.dot(y), xz = 0.0;
    for (int blk = 0; blk < nb_; ++blk) {
      pobj += (C_[blk].cwiseProduct(X[blk])).sum();
      xz += (X[blk].cwiseProduct(Z[blk])).sum();
    }
    const double mu = xz / std::max(total_dim_, 1);
    const double norm_rd = std::sqrt(frob(Rd) * frob(Rd) + rf.squaredNorm());
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.primal_residual = rp.norm() / (1.0 + norm_b);
    sol.dual_residual = norm_rd / (1.0 + norm_c);
    sol.max_constraint_residual = m_ ? rp.cwiseAbs().maxCoeff() : 0.0;

    if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu))
      return finish(Status::NumericalFailure, "non-finite iterate");
    // With no PSD blocks the gap is carried by the residuals alone.
    const double xz_rel = std::abs(xz) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (sol.relative_gap <= opts_.gap_tolerance && xz_rel <= opts_.gap_tolerance &&
        sol.primal_residual <= opts_.residual_tolerance &&
        sol.dual_residual <= opts_.residual_tolerance)
      return finish(Status::Optimal, "converged");
    double max_rd = rf.size() ? rf.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& m : Rd)
      if (m.size()) max_rd = std::max(max_rd, m.cwiseAbs().maxCoeff());
    const double scale = 1.0 + std::abs(pobj) + std::abs(dobj);
    if (sol.relative_gap <= contract_gap && xz_rel <= contract_gap &&
        sol.max_constraint_residual <= contract_res * scale && max_rd <= contract_res * scale) {
      fallback = sol;
      fallback->status = Status::Optimal;
      fallback->X = X;
      fallback->Z = Z;
      fallback->y = y;
      fallback->free_values = xf;
    }

    // Primal infeasibility: y / b'y approaches a ray with -A*y PSD, A_f'y = 0.
    if (dobj > 0) {
      const double viol = (norm_c + norm_rd) / dobj;
      if (viol < opts_.infeasibility_tolerance) {
        sol.primal_infeasible = true;
        return finish(Status::InfeasibleSuspect, "dual objective diverges; primal looks infeasible");
      }
    }
    // Dual infeasibility: X / -pobj approaches a ray in the kernel with negative cost.
    if (pobj < 0) {
      const double viol = (norm_b + rp.norm()) / -pobj;
      if (viol < opts_.infeasibility_tolerance) {
        sol.dual_infeasible = true;
        return finish(Status::InfeasibleSuspect, "primal objective diverges; dual looks infeasible");
      }
    }
    if (iter == opts_.max_iterations) break;

    std::vector<MatrixXd> Zinv;
    for (int blk = 0; blk < nb_; ++blk) {
      Eigen::LLT<MatrixXd> llt(Z[blk]);
      if (llt.info() != Eigen::Success)
        return finish(Status::NumericalFailure, "dual slack lost definiteness");
      Zinv.push_back(llt.solve(MatrixXd::Identity(Z[blk].rows(), Z[blk].cols())));
    }

    // Near the optimal face M is badly conditioned. The normal path factors
    // M directly, shifting its diagonal if needed; the orthogonal path
    // factors G' by QR so that M = R'R without squaring the conditioning.
    // Refinement below restores accuracy in either case.
    MatrixXd R;
    Eigen::LLT<MatrixXd> mfac;
    if (orthogonal_) {
      bool ok = true;
      const MatrixXd Gt = schur_factor(X, Z, ok);
      if (!ok) return finish(Status::NumericalFailure, "iterate lost definiteness");
      R = MatrixXd::Zero(m_, m_);
      if (Gt.rows() >= m_) {
        Eigen::HouseholderQR<MatrixXd> qr(Gt);
        R = qr.matrixQR().topRows(m_).triangularView<Eigen::Upper>();
      }
      const double rmax = m_ ? R.diagonal().cwiseAbs().maxCoeff() : 0.0;
      const double rmin = m_ ? R.diagonal().cwiseAbs().minCoeff() : 0.0;
      if (m_ && !(rmin > 1e-13 * rmax)) {
        const MatrixXd M = R.transpose() * R;
        for (double shift = 1e-14;; shift *= 100) {
          if (shift > 1e-6) return finish(Status::NumericalFailure, "Schur complement factorization failed");
          MatrixXd Ms = M;
          Ms.diagonal().array() += shift * rmax * rmax;
          mfac.compute(Ms);
          if (mfac.info() == Eigen::Success) break;
        }
        R = mfac.matrixU();
      }
    } else {
      MatrixXd M = schur(X, Zinv);
      mfac.compute(M);
      const double mscale = m_ ? M.diagonal().cwiseAbs().maxCoeff() : 0.0;
      for (double shift = 1e-14; mfac.info() != Eigen::Success; shift *= 100) {
        if (shift > 1e-6) return finish(Status::NumericalFailure, "Schur complement factorization failed");
        MatrixXd Ms = M;
        Ms.diagonal().array() += shift * mscale;
        mfac.compute(Ms);
      }
      R = mfac.matrixU();
    }
    auto msolve = [&](const auto& rhs) {
      MatrixXd t = R.transpose().triangularView<Eigen::Lower>().solve(rhs);
      return MatrixXd(R.triangularView<Eigen::Upper>().solve(t));
    };
    MatrixXd MinvAf, S;
    Eigen::LDLT<MatrixXd> sfac;
    if (nf_ > 0) {
      MinvAf = msolve(Af_);
      S = Af_.transpose() * MinvAf;
      S = 0.5 * (S + S.transpose()).eval();
      sfac.compute(S);
      if (sfac.info() != Eigen::Success)
        return finish(Status::NumericalFailure, "free-variable system factorization failed");
    }

    // Newton step for right-hand sides (K, R, p, f):
    //   A(dX) + A_f dxf = p,  A_f' dy = f,  dZ = R - A*(dy),  dX = sym(K - X dZ Zinv).
    auto newton = [&](const std::vector<MatrixXd>& K, const std::vector<MatrixXd>& R, const VectorXd& p,
                      const VectorXd& f, std::vector<MatrixXd>& dX, std::vector<MatrixXd>& dZ, VectorXd& dy,
                      VectorXd& dxf) {
      std::vector<MatrixXd> T(nb_);
      for (int blk = 0; blk < nb_; ++blk) T[blk] = K[blk] - X[blk] * R[blk] * Zinv[blk];
      const VectorXd h = p - apply_A(T);
      if (nf_ > 0) {
        const VectorXd Minvh = msolve(h);
        dxf = sfac.solve(Af_.transpose() * Minvh - f);
        dy = msolve(h - Af_ * dxf);
      } else {
        dxf = VectorXd::Zero(0);
        dy = msolve(h);
      }
      dZ = adjoint(dy);
      dX.resize(nb_);
      for (int blk = 0; blk < nb_; ++blk) {
        dZ[blk] = R[blk] - dZ[blk];
        MatrixXd t = K[blk] - X[blk] * dZ[blk] * Zinv[blk];
        dX[blk] = 0.5 * (t + t.transpose());
      }
    };

    // Solves for the direction given the centering target K, with a few
    // rounds of iterative refinement on the two linear equations.
    auto direction = [&](const std::vector<MatrixXd>& K, std::vector<MatrixXd>& dX,
                         std::vector<MatrixXd>& dZ, VectorXd& dy, VectorXd& dxf) {
      newton(K, Rd, rp, rf, dX, dZ, dy, dxf);
      std::vector<MatrixXd> zeros(nb_);
      for (int blk = 0; blk < nb_; ++blk) zeros[blk] = MatrixXd::Zero(X[blk].rows(), X[blk].cols());
      double last = std::numeric_limits<double>::infinity();
      for (int round = 0; round < 3; ++round) {
        const VectorXd ep = rp - apply_A(dX) - Af_ * dxf;
        const VectorXd ef = rf - Af_.transpose() * dy;
        const double err = ep.norm() + ef.norm();
        if (!(err < 0.5 * last) || err <= 1e-15 * (1.0 + rp.norm())) break;
        last = err;
        std::vector<MatrixXd> cX, cZ;
        VectorXd cy, cf;
        newton(zeros, zeros, ep, ef, cX, cZ, cy, cf);
        for (int blk = 0; blk < nb_; ++blk) {
          dX[blk] += cX[blk];
          dZ[blk] += cZ[blk];
        }
        dy += cy;
        dxf += cf;
      }
    };

    auto step_lengths = [&](const std::vector<MatrixXd>& dX, const std::vector<MatrixXd>& dZ,
                            double& ap, double& ad) {
      ap = ad = std::numeric_limits<double>::infinity();
      bool ok = true;
      for (int blk = 0; blk < nb_; ++blk) {
        ap = std::min(ap, max_step(X[blk], dX[blk], ok));
        ad = std::min(ad, max_step(Z[blk], dZ[blk], ok));
      }
      return ok;
    };

    // Predictor.
    std::vector<MatrixXd> K(nb_), dXa, dZa;
    VectorXd dya, dxfa;
    for (int blk = 0; blk < nb_; ++blk) K[blk] = -X[blk];
    direction(K, dXa, dZa, dya, dxfa);
    double ap = 0, ad = 0;
    if (!step_lengths(dXa, dZa, ap, ad))
      return finish(Status::NumericalFailure, "iterate lost definiteness");
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xz_aff = 0.0;
    for (int blk = 0; blk < nb_; ++blk)
      xz_aff += ((X[blk] + ap * dXa[blk]).cwiseProduct(Z[blk] + ad * dZa[blk])).sum();
    double sigma = total_dim_ > 0 && mu > 0 ? std::pow(std::max(0.0, xz_aff / xz), 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    std::vector<MatrixXd> dX, dZ;
    VectorXd dy, dxf;
    for (int blk = 0; blk < nb_; ++blk)
      K[blk] = sigma * mu * Zinv[blk] - X[blk] - dXa[blk] * dZa[blk] * Zinv[blk];
    direction(K, dX, dZ, dy, dxf);
    if (!step_lengths(dX, dZ, ap, ad))
      return finish(Status::NumericalFailure, "iterate lost definiteness");
    const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad) || (ap < 1e-12 && ad < 1e-12))
      return finish(Status::NumericalFailure, "step length collapsed");

    for (int blk = 0; blk < nb_; ++blk) {
      X[blk] += ap * dX[blk];
      Z[blk] += ad * dZ[blk];
      X[blk] = 0.5 * (X[blk] + X[blk].transpose()).eval();
      Z[blk] = 0.5 * (Z[blk] + Z[blk].transpose()).eval();
    }
    if (nf_ > 0) xf += ap * dxf;
    y += ad * dy;
  }
  return finish(Status::MaxIter, "iteration limit reached");
}

}  // namespace

Solution solve(const Instance& inst, const Options& opts) {
  Solver normal(inst, opts, false);
  Solution sol = normal.run();
  if (sol.status != Status::NumericalFailure && !normal.relaxed()) return sol;
  Solver orthogonal(inst, opts, true);
  Solution alt = orthogonal.run();
  alt.message += " (orthogonal Schur factorization)";
  if (alt.status == Status::Optimal && !orthogonal.relaxed()) return alt;
  return sol.status == Status::Optimal ? sol : alt;
}

}  // namespace fincon::sdp
