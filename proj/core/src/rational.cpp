#include "etalerep/rational.hpp"

#include <cctype>

#include "etalerep/errors.hpp"

namespace etalerep {

namespace {

bool is_decimal(const std::string& s) { return s.find('.') != std::string::npos; }

Rational decimal_to_rational(const std::string& s) {
  std::string digits;
  bool negative = false;
  long frac_digits = -1;
  for (char c : s) {
    if (c == '-' && digits.empty() && !negative && frac_digits < 0) {
      negative = true;
    } else if (c == '+' && digits.empty() && frac_digits < 0) {
      continue;
    } else if (c == '.') {
      if (frac_digits >= 0) throw input_error("malformed decimal: " + s);
      frac_digits = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (frac_digits >= 0) ++frac_digits;
    } else {
      throw input_error("malformed decimal: " + s);
    }
  }
  if (digits.empty()) throw input_error("malformed decimal: " + s);
  mpz_class num(digits, 10);
  mpz_class den = 1;
  for (long i = 0; i < frac_digits; ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw input_error("empty rational literal");
  if (is_decimal(text)) return decimal_to_rational(text);
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
    throw input_error("malformed rational: " + text);
  q.canonicalize();
  if (q.get_den() == 0) throw input_error("zero denominator: " + text);
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace etalerep
