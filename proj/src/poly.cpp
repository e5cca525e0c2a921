#include "fincon/poly.hpp"

#include <numeric>
#include <sstream>

#include "fincon/error.hpp"

namespace fincon {

int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return b < a;
}

namespace {

void fill(int n, int var, int budget, Monomial& cur, std::vector<Monomial>& out) {
  if (var == n) {
    out.push_back(cur);
    return;
  }
  for (int e = budget; e >= 0; --e) {
    cur[var] = e;
    fill(n, var + 1, budget - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> monomial_basis(int n, int d) {
  if (n < 0 || d < 0) throw PreconditionError("monomial basis needs n >= 0 and d >= 0");
  std::vector<Monomial> out;
  for (int deg = 0; deg <= d; ++deg) {
    std::vector<Monomial> layer;
    Monomial cur(n, 0);
    if (n == 0) {
      if (deg == 0) layer.push_back(cur);
    } else {
      // Exact-degree layer: the last variable takes whatever budget remains.
      std::vector<Monomial> all;
      fill(n - 1, 0, deg, cur, all);
      for (auto& m : all) {
        m[n - 1] = deg - total_degree(m);
        if (m[n - 1] >= 0) layer.push_back(m);
      }
    }
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

std::string monomial_to_string(const Monomial& m) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!first) out << '*';
    first = false;
    out << 'x' << i + 1;
    if (m[i] > 1) out << '^' << m[i];
  }
  return first ? "1" : out.str();
}

std::string monomial_key(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(m[i]);
  }
  return out;
}

Monomial parse_monomial_key(const std::string& key, int n) {
  Monomial m;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int e = std::stoi(part, &used);
      if (used != part.size() || e < 0) throw Error("bad exponent");
      m.push_back(e);
    } catch (const std::exception&) {
      throw Error("malformed monomial key '" + key + "'");
    }
  }
  if (static_cast<int>(m.size()) != n)
    throw Error("monomial key '" + key + "' has " + std::to_string(m.size()) +
                " exponents, expected " + std::to_string(n));
  return m;
}

RealPoly to_real(const RationalPoly& p) {
  RealPoly out(p.variables());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.get_d());
  return out;
}

namespace {
std::string coeff_text(const Rational& c) { return to_string(c); }
std::string coeff_text(double c) {
  std::ostringstream o;
  o.precision(12);
  o << c;
  return o.str();
}
}  // namespace

template <typename T>
std::string Poly<T>::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += "(" + coeff_text(c) + ")";
    if (total_degree(m) > 0) out += "*" + monomial_to_string(m);
  }
  return out;
}

template class Poly<Rational>;
template class Poly<double>;

}  // namespace fincon
