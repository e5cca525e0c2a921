#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fincon {

using Rational = mpq_class;

// Parses "p", "p/q", or a plain decimal such as "-1.25" / "3e-2" exactly.
Rational parse_rational(std::string_view text);

// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }
inline double to_double(double value) { return value; }

// Exact conversion of a finite double.
Rational exact_rational(double value);

}  // namespace fincon
