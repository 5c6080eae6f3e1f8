#pragma once

#include <gmpxx.h>

#include <string>

namespace etalerep {

using Rational = mpq_class;

// Parses "num/den", plain integers, and decimal strings ("0.25" -> 1/4).
// Decimals convert exactly; no floating point is involved.
Rational parse_rational(const std::string& text);

// Always emits an explicit denominator ("3" -> "3/1") so reports stay uniform.
std::string format_rational(const Rational& q);

// mpq_class(num, den) does not reduce; every fraction built from raw parts
// must go through here or GMP comparisons misbehave.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q);

}  // namespace etalerep
