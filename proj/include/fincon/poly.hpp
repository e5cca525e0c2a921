#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fincon/rational.hpp"

namespace fincon {

// Exponent vector; length equals the number of variables.
using Monomial = std::vector<int>;

int total_degree(const Monomial& m);

// Graded lexicographic: lower total degree first, then x1 > x2 > ... so that
// the degree-1 block reads x1, x2, ..., xn.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// All exponent vectors of total degree <= d in n variables, graded-lex order.
std::vector<Monomial> monomial_basis(int n, int d);

Monomial monomial_product(const Monomial& a, const Monomial& b);

// "1" for the constant, otherwise e.g. "x1^2*x3".
std::string monomial_to_string(const Monomial& m);
// Comma-separated exponents, "2,0,1"; used as JSON object keys.
std::string monomial_key(const Monomial& m);
Monomial parse_monomial_key(const std::string& key, int n);

namespace detail {
inline bool is_zero(const Rational& v) { return sgn(v) == 0; }
inline bool is_zero(double v) { return v == 0.0; }
}  // namespace detail

// Sparse polynomial in n variables over T (Rational or double). Zero
// coefficients are never stored.
template <typename T>
class Poly {
 public:
  using Terms = std::map<Monomial, T, GradedLex>;

  Poly() = default;
  explicit Poly(int n) : n_(n) {}

  static Poly constant(int n, const T& c) {
    Poly p(n);
    p.add_term(Monomial(n, 0), c);
    return p;
  }
  // x_i, 1-based.
  static Poly variable(int n, int i) {
    Poly p(n);
    Monomial m(n, 0);
    m.at(i - 1) = 1;
    p.add_term(m, T(1));
    return p;
  }

  int variables() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  T coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const Monomial& m, const T& c) {
    if (static_cast<int>(m.size()) != n_) throw std::invalid_argument("monomial arity mismatch");
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const T& s) {
    if (detail::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_arity(b);
    Poly out(a.n_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_product(ma, mb), T(ca * cb));
    return out;
  }
  Poly operator-() const { return *this * T(-1); }

  bool operator==(const Poly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  // Replaces x_j by images[j-1]; all images must share one arity.
  Poly compose(const std::vector<Poly>& images) const {
    if (static_cast<int>(images.size()) != n_) throw std::invalid_argument("compose arity mismatch");
    const int out_n = images.empty() ? 0 : images.front().n_;
    Poly out(out_n);
    for (const auto& [m, c] : terms_) {
      Poly term = constant(out_n, c);
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < m[j]; ++k) term = term * images[j];
      out += term;
    }
    return out;
  }

  template <typename V>
  V evaluate(const std::vector<V>& x) const {
    V total(0);
    for (const auto& [m, c] : terms_) {
      V term = V(c);
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < m[j]; ++k) term *= x[j];
      total += term;
    }
    return total;
  }

  double max_abs_coefficient() const {
    double best = 0.0;
    for (const auto& [m, c] : terms_) best = std::max(best, std::abs(to_double(c)));
    return best;
  }

  std::string to_string() const;

 private:
  void check_arity(const Poly& o) const {
    if (o.n_ != n_) throw std::invalid_argument("polynomial arity mismatch");
  }

  int n_ = 0;
  Terms terms_;
};

extern template class Poly<Rational>;
extern template class Poly<double>;

using RationalPoly = Poly<Rational>;
using RealPoly = Poly<double>;

RealPoly to_real(const RationalPoly& p);

// Sum over the symmetric matrix entries sum_{k,l} G_kl * basis_k * basis_l.
template <typename T>
Poly<T> gram_polynomial(int n, const std::vector<Monomial>& basis, const std::vector<T>& gram) {
  Poly<T> out(n);
  const std::size_t d = basis.size();
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) out.add_term(monomial_product(basis[k], basis[l]), gram[k * d + l]);
  return out;
}

}  // namespace fincon
