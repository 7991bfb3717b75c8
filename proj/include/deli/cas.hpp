// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/expr.hpp>

#include <string>
#include <vector>

/// The algebra interfaces. Every function throws MathError with a code and a
/// message meant to be read by a language model.
namespace deli::cas
{

/// Exact value of a symbol-free expression.
Expr calculate(const Expr& e);

/// Simultaneous substitution of `symbol = value` conditions, then per-side
/// expansion. Solution sets are accepted as condition lists.
Expr substitute(const Expr& e, const std::vector<Expr>& conditions);

/// Real solutions of a univariate equation, ascending. Returns a solution set.
Expr solve_eq(const Expr& e);

/// Solution of a univariate inequality as a set of intervals and points.
Expr solve_ineq(const Expr& e);

/// Linear system. Underdetermined systems bind each pivot symbol in terms of
/// the free ones.
Expr solve_multi_eq(const std::vector<Expr>& equations);

/// Intersection of the solutions of univariate inequalities in one symbol.
Expr solve_multi_ineq(const std::vector<Expr>& inequations);

/// Solves for `unknown`, treating other symbols as constants (degree <= 2).
Expr partial_solve(const Expr& e, const std::string& unknown);

Expr expand(const Expr& e);
Expr factor(const Expr& e);
Expr collect(const Expr& e, const std::string& x);
Expr complete_the_square(const Expr& e);

} // namespace deli::cas
