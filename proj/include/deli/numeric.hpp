// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

namespace deli
{

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den_of(const Rational& r) { return boost::multiprecision::denominator(r); }
inline bool is_integer(const Rational& r) { return den_of(r) == 1; }

inline Rational pow(const Rational& r, unsigned e)
{
    return Rational(boost::multiprecision::pow(num_of(r), e), boost::multiprecision::pow(den_of(r), e));
}

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);

/// Splits n > 0 into (s, d) with n = s^2 * d and d squarefree.
std::pair<BigInt, BigInt> split_square(const BigInt& n);

/// Exact rational square root, if one exists.
bool rational_sqrt(const Rational& r, Rational& out);

/// Parses a decimal literal such as "12" or "0.25" into an exact rational.
Rational parse_decimal(const std::string& digits);

std::string to_string(const Rational& r);
double to_double(const Rational& r);

} // namespace deli
