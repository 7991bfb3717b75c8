// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/canonical.hpp>
#include <deli/errors.hpp>
#include <deli/expr.hpp>
#include <deli/polynomial.hpp>

#include <optional>
#include <string>
#include <vector>

namespace deli::cas::detail
{

[[noreturn]] void fail(Errc code, const std::string& message);

std::string join(const std::vector<std::string>& items, const std::string& sep = ", ");

/// Applies f to both sides of a relation, or to e itself.
template<class F>
Expr per_side(const Expr& e, F&& f)
{
    if (e.is_relation())
        return relation(e.op(), f(e.arg(0)), f(e.arg(1)));
    return f(e);
}

/// canonicalize() + to_expr(), leaving non-rational input untouched.
Expr simplify(const Expr& e);

/// Polynomial of e, or MathError(code) if e has a non-constant denominator.
Polynomial require_polynomial(const Expr& e, Errc code, const std::string& what);

/// A real constant a + b*sqrt(d) + ... kept exactly, plus an approximation
/// used only for ordering.
struct RealValue
{
    Polynomial value;
    long double approx = 0;

    static RealValue of(Polynomial constant);
    static RealValue of(const Rational& r) { return of(Polynomial(r)); }
};

/// -1, 0, +1; exact for rational constants.
int sign(const Polynomial& constant);

/// Three-way comparison, exact on equality.
int compare(const RealValue& a, const RealValue& b);

/// Distinct real roots of a univariate polynomial, ascending. Throws
/// UnsupportedDegree when an irreducible part of degree >= 3 remains.
std::vector<RealValue> real_roots(const Polynomial& p, const std::string& x, const std::string& caller);

Polynomial substitute_value(const Polynomial& p, const std::string& x, const RealValue& v);

/// The single unknown of a univariate problem; nullopt if there is none.
/// Throws NotUnivariate naming all symbols otherwise.
std::optional<std::string> single_symbol(const std::vector<std::string>& symbols, const std::string& caller);

/// Union of disjoint intervals on the real line, ascending.
struct Piece
{
    std::optional<RealValue> lo; // nullopt = -infinity
    bool lo_closed = false;
    std::optional<RealValue> hi; // nullopt = +infinity
    bool hi_closed = false;
};
using PieceSet = std::vector<Piece>;

PieceSet intersect(const PieceSet& a, const PieceSet& b);
PieceSet all_reals();

/// Solution-set items for x.
std::vector<Expr> to_items(const PieceSet& set, const std::string& x);

/// solve_ineq without the Expr wrapping; `x` receives the unknown.
PieceSet solve_inequality(const Expr& e, std::optional<std::string>& x);

/// num/den as a tidy expression; cancels a common polynomial factor.
Expr ratio(const Polynomial& num, const Polynomial& den);

} // namespace deli::cas::detail
