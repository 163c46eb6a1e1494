#include "procpolar/rational.hpp"

#include <cctype>

#include "procpolar/errors.hpp"

namespace procpolar {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw InputError("exact rationals required: cannot read '" + std::string(text) + "' as n or n/d");
  }
  const boost::multiprecision::mpz_int n{std::string(num)};
  const boost::multiprecision::mpz_int d{std::string(den)};
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const Values& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += to_string(values[i]);
  }
  return out + ")";
}

Rational ratio_or_zero(const Rational& a, const Rational& b) {
  if (a == 0) return Rational(0);
  if (b == 0) throw PreconditionError("ratio with zero denominator and nonzero numerator " + to_string(a));
  return a / b;
}

}  // namespace procpolar
