#include "fincon/rational.hpp"

#include <cctype>
#include <cmath>

#include "fincon/error.hpp"

namespace fincon {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error("empty rational literal");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0)
      throw Error("malformed rational '" + s + "'");
    r.canonicalize();
    return r;
  }
  // Decimal with optional exponent, parsed exactly.
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_dot = false, any_digit = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i];
      any_digit = true;
      if (seen_dot) --scale;
    } else {
      throw Error("malformed number '" + s + "'");
    }
  }
  if (!any_digit) throw Error("malformed number '" + s + "'");
  if (i < s.size()) {
    try {
      std::size_t used = 0;
      long e = std::stol(s.substr(i + 1), &used);
      if (used != s.size() - i - 1) throw Error("malformed exponent in '" + s + "'");
      scale += e;
    } catch (const std::logic_error&) {
      throw Error("malformed exponent in '" + s + "'");
    }
  }
  mpz_class num(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale < 0 ? Rational(num, pow10) : Rational(num * pow10);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw Error("non-finite value has no rational form");
  return Rational(value);
}

}  // namespace fincon
