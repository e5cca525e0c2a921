#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fincon/graph.hpp"
#include "fincon/msform.hpp"
#include "fincon/poly.hpp"
#include "fincon/rational.hpp"
#include "fincon/sdp.hpp"

namespace fincon {

// Witness for f - lambda = sigma_0 + sum_i x_i sigma_i + q (sum_i x_i - 1) at
// level r. Gram matrices are dense row-major: gram0 over
// monomial_basis(n, r/2), grams[i] over monomial_basis(n, (r-1)/2).
template <typename T>
struct SosCertificate {
  int n = 0;
  int r = 0;
  T lambda = T(0);
  std::vector<T> gram0;
  std::vector<std::vector<T>> grams;
  Poly<T> q;
};

using RationalCertificate = SosCertificate<Rational>;
using RealCertificate = SosCertificate<double>;

RealCertificate to_real(const RationalCertificate& c);

// Basis sizes for level r in n variables.
int sigma0_basis_size(int n, int r);
int sigma_basis_size(int n, int r);

struct CertificateReport {
  double residual = 0.0;         // max |coefficient| of the identity defect
  bool residual_exact_zero = false;  // rational certificates only
  double min_gram_eigenvalue = 0.0;
  bool grams_psd = false;        // exact for rational certificates
  bool pass = false;
  std::string detail;
};

inline constexpr double kCertificateResidualTolerance = 1e-6;
inline constexpr double kGramEigenvalueTolerance = -1e-8;

// x'Bx as a polynomial.
Poly<Rational> objective_polynomial(const QuadForm& q);

// Checks f - cert.lambda against the certificate. Throws PreconditionError on
// a dimension mismatch. Rational certificates pass iff the defect is exactly
// zero and every Gram is PSD; float certificates pass iff residual <= 1e-6
// and every Gram eigenvalue >= -1e-8.
CertificateReport verify_membership(const Poly<Rational>& f, const RationalCertificate& cert);
CertificateReport verify_membership(const Poly<Rational>& f, const RealCertificate& cert);

CertificateReport verify_certificate(const QuadForm& q, const RationalCertificate& cert);
CertificateReport verify_certificate(const QuadForm& q, const RealCertificate& cert);

// Exact PSD test by symmetric elimination. m is dense row-major d x d.
bool is_psd_exact(const std::vector<Rational>& m, int d);

// n - sum x_i^2 at level 3, written as f - lambda with f = -sum x_i^2 and
// lambda = -n.
RationalCertificate archimedean_certificate(int n);

struct FeasibilityBound {
  Rational mu;            // rational lower bound on lambda_min(B), or 0 if B is PSD
  Rational bound;         // n * mu, or 0
  double lambda_min = 0;  // floating smallest eigenvalue of B
  double float_bound = 0; // n * lambda_min, or 0
  bool psd = false;
  RationalCertificate certificate;  // level 2 if B is PSD, else level 3
};

FeasibilityBound feasibility_bound(const QuadForm& q);

// Substitutes the variable of `kept` in a certificate for G minus `removed`
// by x_removed + x_kept. Throws PreconditionError unless {removed, kept} is a
// twin pair of g and cert verifies for ms_matrix(G minus removed).
template <typename T>
SosCertificate<T> lift_certificate_through_twin(const SosCertificate<T>& cert, const Graph& g,
                                                Vertex removed, Vertex kept);

struct LevelCaps {
  int r_max = 6;
  int basis_cap = 500;  // sum of Gram basis sizes
};

// PreconditionError for n < 1 or r < 2, CapExceeded past the caps. The
// message carries the basis and constraint counts.
void check_level(const QuadForm& q, int r, const LevelCaps& caps = {});

// Level-r program as an SDP: X blocks are sigma_0 then sigma_1..sigma_n; free
// variable 0 is lambda and the rest are the coefficients of q over
// monomial_basis(n, r - 1). The objective minimizes -lambda.
sdp::Instance assemble_level(const QuadForm& q, int r, const LevelCaps& caps = {});
RealCertificate decode_certificate(const QuadForm& q, int r, const sdp::Solution& sol);

// Same level with x_n eliminated through x_n = 1 - x_1 - ... - x_{n-1}:
//   f(x', 1 - sum x') - lambda = s_0 + sum_{i<n} x_i s_i + (1 - sum x') s_n
// with s_i SOS in n - 1 variables and the same degree bounds. Blocks are s_0
// then s_1..s_n; the only free variable is lambda. Both programs have the
// same optimum, and this one has a strictly feasible moment side.
sdp::Instance assemble_reduced_level(const QuadForm& q, int r, const LevelCaps& caps = {});
// Lifts a reduced solution to a certificate in all n variables; q is
// recovered by dividing the remaining defect by sum x - 1.
RealCertificate decode_reduced_certificate(const QuadForm& q, int r, const sdp::Solution& sol);

enum class Formulation { Reduced, Direct };
std::string to_string(Formulation f);

struct LevelOptions {
  sdp::Options solver;
  LevelCaps caps;
  Formulation formulation = Formulation::Reduced;
};

struct HierarchyResult {
  int r = 0;
  Formulation formulation = Formulation::Reduced;
  // -inf when the level program looks infeasible; NaN on solver failure.
  double value = 0.0;
  sdp::Status solver_status = sdp::Status::NumericalFailure;
  double target = 0.0;         // 1 / alpha(G)
  double gap_to_target = 0.0;  // target - value
  bool attained = false;       // value >= target - 1e-6 and certificate verifies
  std::optional<RealCertificate> certificate;
  std::optional<CertificateReport> verification;
  std::optional<sdp::CheckReport> check;
  int iterations = 0;
  std::string message;
};

inline constexpr double kAttainmentTolerance = 1e-6;

HierarchyResult solve_level(const QuadForm& q, int r, const LevelOptions& opts = {});

// Levels r_min..r_max; runs up to `threads` solves at once.
std::vector<HierarchyResult> sweep_levels(const QuadForm& q, int r_min, int r_max,
                                          const LevelOptions& opts = {}, int threads = 1);

// Dual of min c'x s.t. Ax >= b, Dx = f:
//   max b'alpha + f'beta s.t. A'alpha + D'beta = c, alpha >= 0.
struct LpProblem {
  std::vector<Rational> c;
  std::vector<std::vector<Rational>> A;  // rows
  std::vector<Rational> b;
  std::vector<std::vector<Rational>> D;
  std::vector<Rational> f;
};

// Status of the level-one program itself: Infeasible means the LP is
// unbounded or infeasible, Unbounded means the LP is infeasible.
enum class LpStatus { Optimal, Infeasible, Unbounded };
std::string to_string(LpStatus s);

struct LpLevelOne {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
};

// Exact two-phase simplex with Bland's rule.
LpLevelOne lp_level_one(const LpProblem& lp);

}  // namespace fincon
