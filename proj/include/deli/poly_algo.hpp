// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/polynomial.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace deli
{

// Algorithms over Q[x1..xn]. Inputs must be free of radicals unless noted.

/// Rational c such that p / c has coprime integer coefficients and a positive
/// leading coefficient. Zero for the zero polynomial.
Rational rational_content(const Polynomial& p);

/// p scaled to coprime integer coefficients with a positive leading coefficient.
Polynomial normalize(const Polynomial& p);

/// Greatest common divisor, normalized. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Content of p viewed as a polynomial in `symbol`: gcd of its coefficients.
Polynomial content_in(const Polynomial& p, const std::string& symbol);

/// Pseudo-remainder of a by b with respect to `symbol`.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, const std::string& symbol);

/// Exact square root with positive leading coefficient, if p is a perfect square.
/// Radical-free constants and polynomials only.
std::optional<Polynomial> sqrt_exact(const Polynomial& p);

/// Distinct rational roots of a univariate polynomial, ascending, with multiplicity.
std::vector<std::pair<Rational, unsigned>> rational_roots(const Polynomial& p, const std::string& symbol);

struct Factorization
{
    Rational content = 1;
    std::vector<std::pair<Polynomial, unsigned>> factors; // normalized, sorted, distinct
};

/// Factors over Q: content, monomial factors, square-free splitting, linear
/// factors of univariate parts via rational roots, and quadratic-in-one-symbol
/// splitting through the discriminant. Anything beyond that is kept whole.
/// Radical-bearing inputs come back as a single factor.
Factorization factor_polynomial(const Polynomial& p);

Polynomial expand(const Factorization& f);

/// Total order used to list factors deterministically (lower degree first).
bool factor_less(const Polynomial& a, const Polynomial& b);

} // namespace deli
