// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/expr.hpp>
#include <deli/polynomial.hpp>

#include <optional>

namespace deli
{

/// Expanded numerator/denominator pair. The denominator is radical-free and
/// monic; it is exactly 1 whenever the input was a polynomial. Common factors
/// are not cancelled.
struct CanonicalForm
{
    Polynomial numerator;
    Polynomial denominator {Rational(1)};

    [[nodiscard]] bool is_polynomial() const { return denominator == Polynomial(Rational(1)); }
    bool operator==(const CanonicalForm& other) const = default;
};

/// Relations canonicalize lhs - rhs. Throws MathError(NonRationalForm) when
/// the input leaves polynomial/rational scope, and InvalidArgument for
/// intervals and solution sets.
CanonicalForm canonicalize(const Expr& e);

/// Polynomial view of e, or nullopt if e has a non-constant denominator.
std::optional<Polynomial> as_polynomial(const Expr& e);

/// Mathematical equivalence. Non-rational forms are compared at seeded random
/// rational points; throws MathError(Indeterminate) when too few points are
/// usable.
bool is_equiv(const Expr& a, const Expr& b);

/// Sum of monomials, leading term first.
Expr to_expr(const Polynomial& p);
Expr to_expr(const CanonicalForm& f);

} // namespace deli
