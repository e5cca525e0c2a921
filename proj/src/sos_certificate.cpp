#include <Eigen/Dense>

#include <cmath>
#include <map>

#include "fincon/error.hpp"
#include "fincon/sos.hpp"
#include "fincon/stability.hpp"

namespace fincon {

namespace {

int basis_size(int n, int d) { return static_cast<int>(monomial_basis(n, d).size()); }

template <typename T>
Poly<T> simplex_constraint(int n) {
  Poly<T> h = Poly<T>::constant(n, T(-1));
  for (int i = 1; i <= n; ++i) h += Poly<T>::variable(n, i);
  return h;
}

template <typename T>
Poly<T> convert(const Poly<Rational>& p);

template <>
Poly<Rational> convert(const Poly<Rational>& p) {
  return p;
}

template <>
Poly<double> convert(const Poly<Rational>& p) {
  return to_real(p);
}


double min_eigenvalue(const std::vector<double>& m, int d) {
  if (d == 0) return 0.0;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = 0.5 * (m[i * d + j] + m[j * d + i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double asymmetry(const std::vector<double>& m, int d) {
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) worst = std::max(worst, std::abs(m[i * d + j] - m[j * d + i]));
  return worst;
}

std::vector<double> as_doubles(const std::vector<Rational>& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (const auto& v : m) out.push_back(v.get_d());
  return out;
}

template <typename T>
void check_dimensions(const Poly<Rational>& f, const SosCertificate<T>& cert) {
  const int n = cert.n;
  if (n != f.variables())
    throw PreconditionError("certificate has " + std::to_string(n) + " variables, expected " +
                            std::to_string(f.variables()));
  if (cert.r < 1) throw PreconditionError("certificate level must be at least 1");
  const auto s0 = static_cast<std::size_t>(sigma0_basis_size(n, cert.r));
  const auto s1 = static_cast<std::size_t>(sigma_basis_size(n, cert.r));
  if (cert.gram0.size() != s0 * s0)
    throw PreconditionError("gram0 has " + std::to_string(cert.gram0.size()) + " entries, expected " +
                            std::to_string(s0 * s0));
  if (cert.grams.size() != static_cast<std::size_t>(n))
    throw PreconditionError("expected " + std::to_string(n) + " multiplier Grams, got " +
                            std::to_string(cert.grams.size()));
  for (std::size_t i = 0; i < cert.grams.size(); ++i)
    if (cert.grams[i].size() != s1 * s1)
      throw PreconditionError("gram " + std::to_string(i + 1) + " has " +
                              std::to_string(cert.grams[i].size()) + " entries, expected " +
                              std::to_string(s1 * s1));
  if (!cert.q.is_zero() && cert.q.variables() != n)
    throw PreconditionError("q has the wrong number of variables");
  if (cert.q.degree() > cert.r - 1)
    throw PreconditionError("q has degree " + std::to_string(cert.q.degree()) + " above " +
                            std::to_string(cert.r - 1));
}

template <typename T>
Poly<T> defect(const Poly<Rational>& f, const SosCertificate<T>& cert) {
  const int n = cert.n;
  const auto b0 = monomial_basis(n, cert.r / 2);
  const auto b1 = monomial_basis(n, (cert.r - 1) / 2);
  Poly<T> rhs = gram_polynomial<T>(n, b0, cert.gram0);
  for (int i = 0; i < n; ++i)
    rhs += Poly<T>::variable(n, i + 1) * gram_polynomial<T>(n, b1, cert.grams[i]);
  if (!cert.q.is_zero()) rhs += cert.q * simplex_constraint<T>(n);
  rhs += Poly<T>::constant(n, cert.lambda);
  return convert<T>(f) - rhs;
}

}  // namespace

int sigma0_basis_size(int n, int r) { return basis_size(n, r / 2); }
int sigma_basis_size(int n, int r) { return basis_size(n, (r - 1) / 2); }

RealCertificate to_real(const RationalCertificate& c) {
  RealCertificate out;
  out.n = c.n;
  out.r = c.r;
  out.lambda = c.lambda.get_d();
  out.gram0 = as_doubles(c.gram0);
  for (const auto& g : c.grams) out.grams.push_back(as_doubles(g));
  out.q = to_real(c.q);
  if (out.q.is_zero()) out.q = RealPoly(c.n);
  return out;
}

Poly<Rational> objective_polynomial(const QuadForm& q) {
  const int n = q.n();
  RationalPoly f(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const Rational& b = q.entry(i, j);
      if (sgn(b) == 0) continue;
      Monomial m(n, 0);
      m[i - 1] += 1;
      m[j - 1] += 1;
      f.add_term(m, b);
    }
  return f;
}

bool is_psd_exact(const std::vector<Rational>& input, int d) {
  if (input.size() != static_cast<std::size_t>(d) * d)
    throw PreconditionError("matrix size does not match dimension");
  std::vector<Rational> m = input;
  auto at = [&](int i, int j) -> Rational& { return m[static_cast<std::size_t>(i) * d + j]; };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (at(i, j) != at(j, i)) return false;
  std::vector<char> done(d, 0);
  for (int step = 0; step < d; ++step) {
    int p = -1;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      if (sgn(at(i, i)) < 0) return false;
      if (p < 0 && sgn(at(i, i)) > 0) p = i;
    }
    if (p < 0) {
      // Zero diagonal on the remaining block: PSD iff the block vanishes.
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (!done[i] && !done[j] && sgn(at(i, j)) != 0) return false;
      return true;
    }
    done[p] = 1;
    for (int i = 0; i < d; ++i) {
      if (done[i] || sgn(at(i, p)) == 0) continue;
      const Rational factor = at(i, p) / at(p, p);
      for (int j = 0; j < d; ++j)
        if (!done[j]) at(i, j) -= factor * at(p, j);
    }
  }
  return true;
}

CertificateReport verify_membership(const Poly<Rational>& f, const RationalCertificate& cert) {
  check_dimensions(f, cert);
  CertificateReport rep;
  const RationalPoly d = defect(f, cert);
  rep.residual = d.max_abs_coefficient();
  rep.residual_exact_zero = d.is_zero();
  const int s0 = sigma0_basis_size(cert.n, cert.r);
  const int s1 = sigma_basis_size(cert.n, cert.r);
  rep.grams_psd = is_psd_exact(cert.gram0, s0);
  if (!rep.grams_psd) rep.detail = "gram0 is not PSD";
  rep.min_gram_eigenvalue = min_eigenvalue(as_doubles(cert.gram0), s0);
  for (std::size_t i = 0; i < cert.grams.size(); ++i) {
    if (!is_psd_exact(cert.grams[i], s1)) {
      rep.grams_psd = false;
      if (rep.detail.empty()) rep.detail = "gram " + std::to_string(i + 1) + " is not PSD";
    }
    rep.min_gram_eigenvalue =
        std::min(rep.min_gram_eigenvalue, min_eigenvalue(as_doubles(cert.grams[i]), s1));
  }
  if (!rep.residual_exact_zero)
    rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("identity defect ") + d.to_string();
  rep.pass = rep.residual_exact_zero && rep.grams_psd;
  return rep;
}

CertificateReport verify_membership(const Poly<Rational>& f, const RealCertificate& cert) {
  check_dimensions(f, cert);
  CertificateReport rep;
  const RealPoly d = defect(f, cert);
  rep.residual = d.max_abs_coefficient();
  rep.residual_exact_zero = d.is_zero();
  const int s0 = sigma0_basis_size(cert.n, cert.r);
  const int s1 = sigma_basis_size(cert.n, cert.r);
  double skew = asymmetry(cert.gram0, s0);
  rep.min_gram_eigenvalue = min_eigenvalue(cert.gram0, s0);
  for (const auto& g : cert.grams) {
    skew = std::max(skew, asymmetry(g, s1));
    rep.min_gram_eigenvalue = std::min(rep.min_gram_eigenvalue, min_eigenvalue(g, s1));
  }
  rep.grams_psd = rep.min_gram_eigenvalue >= kGramEigenvalueTolerance && skew <= 1e-9;
  if (skew > 1e-9) rep.detail = "Gram matrix is not symmetric";
  if (rep.min_gram_eigenvalue < kGramEigenvalueTolerance)
    rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("negative Gram eigenvalue");
  if (rep.residual > kCertificateResidualTolerance)
    rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("identity residual too large");
  rep.pass = rep.residual <= kCertificateResidualTolerance && rep.grams_psd;
  return rep;
}

CertificateReport verify_certificate(const QuadForm& q, const RationalCertificate& cert) {
  return verify_membership(objective_polynomial(q), cert);
}

CertificateReport verify_certificate(const QuadForm& q, const RealCertificate& cert) {
  return verify_membership(objective_polynomial(q), cert);
}

RationalCertificate archimedean_certificate(int n) {
  if (n < 1) throw PreconditionError("archimedean certificate needs n >= 1");
  RationalCertificate c;
  c.n = n;
  c.r = 3;
  c.lambda = Rational(-n);
  const int d = n + 1;  // basis 1, x1, ..., xn
  const Rational half(1, 2);
  // (1 -/+ x_i)^2 / 2 as Gram entries over the degree-1 basis.
  auto add_square = [&](std::vector<Rational>& g, int i, int sign) {
    g[0] += half;
    g[i] += sign * half;
    g[static_cast<std::size_t>(i) * d] += sign * half;
    g[static_cast<std::size_t>(i) * d + i] += half;
  };
  c.gram0.assign(static_cast<std::size_t>(d) * d, Rational(0));
  for (int i = 1; i <= n; ++i) add_square(c.gram0, i, -1);
  c.grams.assign(n, std::vector<Rational>(static_cast<std::size_t>(d) * d, Rational(0)));
  for (int k = 1; k <= n; ++k) {
    add_square(c.grams[k - 1], k, -1);
    for (int i = 1; i <= n; ++i)
      if (i != k) add_square(c.grams[k - 1], i, +1);
  }
  c.q = RationalPoly(n);
  for (int i = 1; i <= n; ++i) {
    RationalPoly s = RationalPoly::constant(n, Rational(1)) + RationalPoly::variable(n, i);
    c.q -= s * s * half;
  }
  return c;
}

FeasibilityBound feasibility_bound(const QuadForm& q) {
  const int n = q.n();
  if (n < 1) throw PreconditionError("feasibility bound needs n >= 1");
  std::vector<Rational> b(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i * n + j] = q.entry(i + 1, j + 1);

  FeasibilityBound out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.dense(), Eigen::EigenvaluesOnly);
  out.lambda_min = es.eigenvalues()(0);

  const int d = n + 1;
  auto embed = [&](std::vector<Rational>& g, const std::vector<Rational>& m) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(i + 1) * d + (j + 1)] += m[i * n + j];
  };

  RationalCertificate& c = out.certificate;
  c.n = n;
  if (is_psd_exact(b, n)) {
    out.psd = true;
    c.r = 2;
    c.lambda = 0;
    c.gram0.assign(static_cast<std::size_t>(d) * d, Rational(0));
    embed(c.gram0, b);
    c.grams.assign(n, std::vector<Rational>(1, Rational(0)));
    c.q = RationalPoly(n);
    return out;
  }

  // Largest rational mu just below lambda_min with B - mu I PSD.
  double delta = 1e-12 * std::max(1.0, std::abs(out.lambda_min));
  std::vector<Rational> shifted;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 40) throw Error("could not find a PSD shift of B");
    out.mu = exact_rational(out.lambda_min - delta);
    shifted = b;
    for (int i = 0; i < n; ++i) shifted[i * n + i] -= out.mu;
    if (is_psd_exact(shifted, n)) break;
    delta *= 4;
  }
  out.bound = out.mu * n;
  out.float_bound = n * out.lambda_min;

  const RationalCertificate arch = archimedean_certificate(n);
  const Rational scale = -out.mu;
  c.r = 3;
  c.lambda = out.bound;
  c.gram0 = arch.gram0;
  for (auto& v : c.gram0) v *= scale;
  embed(c.gram0, shifted);
  c.grams = arch.grams;
  for (auto& g : c.grams)
    for (auto& v : g) v *= scale;
  c.q = arch.q * scale;
  return out;
}

template <typename T>
SosCertificate<T> lift_certificate_through_twin(const SosCertificate<T>& cert, const Graph& g,
                                                Vertex removed, Vertex kept) {
  if (removed == kept || !is_twin_pair(g, removed, kept))
    throw PreconditionError("{" + std::to_string(removed) + "," + std::to_string(kept) +
                            "} is not a twin pair");
  const VertexDeletion del = delete_vertex(g, removed);
  const int m = del.graph.n();
  const int n = g.n();
  const CertificateReport rep = verify_certificate(ms_matrix(del.graph), cert);
  if (!rep.pass) throw PreconditionError("certificate does not verify for the reduced graph: " + rep.detail);

  int kept_small = 0;
  for (int k = 1; k <= m; ++k)
    if (del.labels.to_original(k) == kept) kept_small = k;

  std::vector<Poly<T>> images;
  for (int k = 1; k <= m; ++k) {
    Poly<T> x = Poly<T>::variable(n, del.labels.to_original(k));
    if (k == kept_small) x += Poly<T>::variable(n, removed);
    images.push_back(x);
  }

  // Gram G over basis b(y) becomes P' G P over basis b(x), where b(y(x)) = P b(x).
  auto transform = [&](const std::vector<T>& gram, int degree) {
    const auto by = monomial_basis(m, degree);
    const auto bx = monomial_basis(n, degree);
    std::map<Monomial, int, GradedLex> index;
    for (std::size_t j = 0; j < bx.size(); ++j) index[bx[j]] = static_cast<int>(j);
    const std::size_t sy = by.size(), sx = bx.size();
    std::vector<T> p(sy * sx, T(0));
    for (std::size_t k = 0; k < sy; ++k) {
      Poly<T> mono(m);
      mono.add_term(by[k], T(1));
      const Poly<T> image = mono.compose(images);
      for (const auto& [mon, coef] : image.terms()) p[k * sx + index.at(mon)] = coef;
    }
    std::vector<T> gp(sy * sx, T(0));
    for (std::size_t a = 0; a < sy; ++a)
      for (std::size_t b = 0; b < sy; ++b) {
        const T& v = gram[a * sy + b];
        if (detail::is_zero(v)) continue;
        for (std::size_t j = 0; j < sx; ++j)
          if (!detail::is_zero(p[b * sx + j])) gp[a * sx + j] += v * p[b * sx + j];
      }
    std::vector<T> out(sx * sx, T(0));
    for (std::size_t a = 0; a < sy; ++a)
      for (std::size_t i = 0; i < sx; ++i) {
        if (detail::is_zero(p[a * sx + i])) continue;
        for (std::size_t j = 0; j < sx; ++j) out[i * sx + j] += p[a * sx + i] * gp[a * sx + j];
      }
    return out;
  };

  SosCertificate<T> out;
  out.n = n;
  out.r = cert.r;
  out.lambda = cert.lambda;
  out.gram0 = transform(cert.gram0, cert.r / 2);
  out.grams.assign(n, {});
  for (int k = 1; k <= m; ++k) out.grams[del.labels.to_original(k) - 1] = transform(cert.grams[k - 1], (cert.r - 1) / 2);
  out.grams[removed - 1] = out.grams[kept - 1];
  out.q = cert.q.is_zero() ? Poly<T>(n) : cert.q.compose(images);
  return out;
}

template RationalCertificate lift_certificate_through_twin(const RationalCertificate&, const Graph&,
                                                           Vertex, Vertex);
template RealCertificate lift_certificate_through_twin(const RealCertificate&, const Graph&, Vertex,
                                                       Vertex);

}  // namespace fincon
