#include <cmath>
#include <sstream>

#include "fincon/error.hpp"
#include "fincon/msform.hpp"

namespace fincon {
namespace {

KktReport kkt_impl(const QuadForm& q, const std::vector<double>& x, bool minimizer,
                   const KktTolerances& tol) {
  const int n = q.n();
  if (static_cast<int>(x.size()) != n)
    throw PreconditionError("point dimension does not match the form");
  const Eigen::MatrixXd B = q.dense();
  const Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::VectorXd grad = 2.0 * B * u;

  KktReport rep;
  rep.minimizer = minimizer;
  std::vector<Vertex> active, free;
  for (int j = 0; j < n; ++j) (std::abs(x[j]) <= tol.activity ? active : free).push_back(j + 1);
  rep.active_set = VertexSet(active);

  // Rows: gradients of the active constraints x_j >= 0, then of sum(x) - 1.
  const int rows = static_cast<int>(active.size()) + 1;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(rows, n);
  for (std::size_t k = 0; k < active.size(); ++k) jac(static_cast<int>(k), active[k] - 1) = 1.0;
  jac.row(rows - 1).setOnes();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
  rep.gradient_rank = static_cast<int>(lu.rank());
  rep.cqc = rep.gradient_rank == rows;

  // grad = lambda * 1 + sum_{j active} mu_j e_j, solved in least squares.
  Eigen::VectorXd coef = jac.transpose().colPivHouseholderQr().solve(grad);
  rep.lambda = coef(rows - 1);
  rep.stationarity_residual = (jac.transpose() * coef - grad).cwiseAbs().maxCoeff();
  if (rep.stationarity_residual > tol.stationarity * (1.0 + grad.cwiseAbs().maxCoeff())) {
    std::ostringstream msg;
    msg << "multiplier system is inconsistent (residual " << rep.stationarity_residual
        << "); the point is not a KKT point";
    throw PreconditionError(msg.str());
  }
  rep.mu.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t k = 0; k < active.size(); ++k) rep.mu[active[k] - 1] = coef(static_cast<int>(k));

  rep.dual_feasible = true;
  rep.scc = true;
  for (Vertex j : active) {
    if (rep.mu[j - 1] < -tol.multiplier) rep.dual_feasible = false;
    if (!(rep.mu[j - 1] > tol.multiplier)) rep.scc = false;
  }

  // Hessian of the Lagrangian is 2B (all constraints are affine); restrict it
  // to the kernel of the active gradients.
  Eigen::MatrixXd kernel = lu.kernel();
  if (lu.rank() == n || kernel.cols() == 0 || kernel.norm() == 0.0) {
    rep.sosc = true;
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    const Eigen::MatrixXd basis =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, kernel.cols());
    const Eigen::MatrixXd projected = basis.transpose() * (2.0 * B) * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (projected + projected.transpose()),
                                                      Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      rep.projected_hessian_spectrum.push_back(es.eigenvalues()(k));
    rep.sosc = es.eigenvalues()(0) > tol.curvature;
  }

  std::ostringstream d;
  d << "active " << active.size() << "/" << n << ", rank " << rep.gradient_rank << "/" << rows;
  if (!rep.dual_feasible) d << ", negative multiplier (not a KKT point of the minimization)";
  if (!rep.scc) d << ", zero multiplier on an active constraint";
  if (!rep.sosc) d << ", flat or negative curvature on the critical cone";
  if (!minimizer) d << ", point is not a global minimizer";
  rep.details = d.str();
  return rep;
}

}  // namespace

KktReport kkt_check(const QuadForm& q, const SimplexPoint<double>& x, KktTolerances tol) {
  return kkt_impl(q, x.values(), is_minimizer(q, x).minimizer, tol);
}

KktReport kkt_check(const QuadForm& q, const SimplexPoint<Rational>& x, KktTolerances tol) {
  return kkt_impl(q, x.as_double(), is_minimizer(q, x).minimizer, tol);
}

}  // namespace fincon
