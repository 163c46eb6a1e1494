#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace procpolar {

using Rational = boost::multiprecision::mpq_rational;
using NodeId = std::size_t;

/// Node-indexed (or point-indexed) vector of signed rationals.
using Values = std::vector<Rational>;

/// Parses "n", "-n" or "n/d". Decimal and exponent notation is rejected with
/// an InputError whose message contains "exact rationals required".
Rational parse_rational(std::string_view text);

/// "n" for integers, "n/d" otherwise (d > 0, lowest terms).
std::string to_string(const Rational& value);

std::string to_string(const Values& values);

/// a/b with the convention 0/0 = 0. Requires b != 0 unless a == 0.
Rational ratio_or_zero(const Rational& a, const Rational& b);

}  // namespace procpolar
