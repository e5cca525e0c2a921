#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace fincon::sdp {

// One upper-triangular entry (row <= col, 0-based) of a symmetric matrix; an
// off-diagonal entry stands for both (row, col) and (col, row).
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct SparseSym {
  std::vector<SymEntry> entries;

  void add(int row, int col, double value);
  // Throws fincon::PreconditionError unless m is symmetric.
  static SparseSym from_dense(const Eigen::MatrixXd& m);
  Eigen::MatrixXd to_dense(int dim) const;
};

struct Constraint {
  std::vector<std::pair<int, SparseSym>> blocks;  // (block index, matrix)
  std::vector<std::pair<int, double>> free;       // (free index, coefficient)
  double rhs = 0.0;
};

// Standard form with free variables:
//
//   primal  min  <C, X> + c_f' x_f
//           s.t. <A_i, X> + a_i' x_f = b_i   for every constraint i
//                X = diag(X_1, ..., X_k) PSD, x_f free
//
//   dual    max  b' y
//           s.t. Z = C - sum_i y_i A_i PSD,  c_f = sum_i y_i a_i
//
// The sos module places the Gram matrices of a certificate in X, so the
// primal is the sum-of-squares side and the dual is the moment side.
struct Instance {
  std::vector<int> block_dims;
  int free_dim = 0;
  std::vector<SparseSym> cost;  // one per block, possibly empty
  std::vector<double> free_cost;
  std::vector<Constraint> constraints;

  // Checks dimensions and triangular storage; throws PreconditionError.
  void validate() const;
  int total_block_dim() const;
};

enum class Status { Optimal, MaxIter, InfeasibleSuspect, NumericalFailure };

std::string to_string(Status s);

struct Options {
  double gap_tolerance = 1e-8;       // relative duality gap
  double residual_tolerance = 1e-8;  // relative primal/dual residual
  int max_iterations = 200;
  // A Farkas-type direction whose normalized violation drops below this
  // triggers InfeasibleSuspect.
  double infeasibility_tolerance = 1e-8;
};

struct Solution {
  Status status = Status::NumericalFailure;
  // Set when status is InfeasibleSuspect: which side looks infeasible.
  bool primal_infeasible = false;
  bool dual_infeasible = false;

  std::vector<Eigen::MatrixXd> X;
  std::vector<Eigen::MatrixXd> Z;
  Eigen::VectorXd free_values;
  Eigen::VectorXd y;

  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_residual = 0.0;  // relative
  double dual_residual = 0.0;    // relative
  double max_constraint_residual = 0.0;  // absolute, max_i |b_i - <A_i,X> - a_i'x_f|
  int iterations = 0;
  std::string message;
};

// Primal-dual path following with the HKM direction and Mehrotra
// predictor-corrector steps. Deterministic for fixed options.
Solution solve(const Instance& inst, const Options& opts = {});

struct CheckReport {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double max_primal_residual = 0.0;  // absolute
  double max_dual_residual = 0.0;    // absolute, max entry of C - A*y - Z and c_f - A_f'y
  double min_primal_eigenvalue = 0.0;
  double min_dual_eigenvalue = 0.0;
  // Recomputed quantities satisfy the Optimal contract: relative gap and
  // residuals <= 1e-7, primal blocks PSD to -1e-9.
  bool meets_optimal_contract = false;
  // Status claims agree with the recomputation.
  bool consistent = false;
};

// Recomputes residuals, objectives and PSD margins from scratch.
CheckReport check_solution(const Instance& inst, const Solution& sol);

// SDPA sparse format. The SDPA primal "min c'x s.t. sum_i x_i F_i - F_0 PSD"
// is our dual with x = y, c = -b, F_i = -A_i, F_0 = -C; free-variable rows
// become a diagonal block holding both inequalities of each equality.
std::string write_sdpa(const Instance& inst);

}  // namespace fincon::sdp
