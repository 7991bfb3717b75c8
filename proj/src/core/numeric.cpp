// SPDX-License-Identifier: Apache-2.0
#include <deli/numeric.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace deli
{

BigInt gcd(const BigInt& a, const BigInt& b)
{
    return boost::multiprecision::gcd(a, b);
}

BigInt lcm(const BigInt& a, const BigInt& b)
{
    if (a == 0 || b == 0)
        return 0;
    return boost::multiprecision::abs(a / gcd(a, b) * b);
}

std::pair<BigInt, BigInt> split_square(const BigInt& n)
{
    BigInt rest = n;
    BigInt square = 1;
    BigInt free = 1;
    for (BigInt p = 2; p * p <= rest && p < 1000000; p += (p == 2 ? 1 : 2))
    {
        unsigned count = 0;
        while (rest % p == 0)
        {
            rest /= p;
            ++count;
        }
        for (unsigned i = 0; i < count / 2; ++i)
            square *= p;
        if (count % 2 == 1)
            free *= p;
    }
    // Whatever survives trial division is either a perfect square or taken as squarefree.
    BigInt root = boost::multiprecision::sqrt(rest);
    if (root * root == rest)
        square *= root;
    else
        free *= rest;
    return {square, free};
}

bool rational_sqrt(const Rational& r, Rational& out)
{
    if (r < 0)
        return false;
    BigInt n = num_of(r);
    BigInt d = den_of(r);
    BigInt rn = boost::multiprecision::sqrt(n);
    BigInt rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d)
        return false;
    out = Rational(rn, rd);
    return true;
}

Rational parse_decimal(const std::string& digits)
{
    auto dot = digits.find('.');
    if (dot == std::string::npos)
        return Rational(BigInt(digits));
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i)
        scale *= 10;
    BigInt value = BigInt(whole.empty() ? std::string("0") : whole) * scale;
    if (!frac.empty())
        value += BigInt(frac);
    return Rational(value, scale);
}

std::string to_string(const Rational& r)
{
    if (is_integer(r))
        return num_of(r).str();
    return num_of(r).str() + "/" + den_of(r).str();
}

double to_double(const Rational& r)
{
    using Float = boost::multiprecision::cpp_bin_float_50;
    Float value = Float(num_of(r)) / Float(den_of(r));
    return value.convert_to<double>();
}

} // namespace deli
