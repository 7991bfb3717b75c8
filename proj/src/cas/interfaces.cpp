// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <deli/cas.hpp>
#include <deli/poly_algo.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace deli::cas
{

using namespace detail;

namespace
{

void require_category(const Expr& e, ExprCategory want, const std::string& caller, const std::string& hint)
{
    if (e.category() != want)
        fail(Errc::InvalidArgument, caller + " expects " + hint + ", got " + print(e));
}

// Bindings from a condition list; solution sets contribute their items.
std::vector<std::pair<std::string, Expr>> bindings_of(const std::vector<Expr>& conditions)
{
    std::vector<std::pair<std::string, Expr>> out;
    auto take = [&](const Expr& c) {
        if (c.is_relation() && c.op() == RelOp::Eq)
        {
            if (c.arg(0).is_symbol())
            {
                out.emplace_back(c.arg(0).name(), c.arg(1));
                return;
            }
            if (c.arg(1).is_symbol() && c.arg(0).free_symbols().empty())
            {
                out.emplace_back(c.arg(1).name(), c.arg(0));
                return;
            }
        }
        fail(Errc::BadCondition, "substitute needs conditions of the form symbol = value, got " + print(c) +
                                     "; rearrange it first, e.g. with partial_solve");
    };
    for (const auto& c: conditions)
    {
        if (c.category() == ExprCategory::SolutionSet)
            for (const auto& item: c.args())
                take(item);
        else
            take(c);
    }
    std::set<std::string> seen;
    for (const auto& [name, _]: out)
        if (!seen.insert(name).second)
            fail(Errc::BadCondition, "substitute received two values for " + name);
    return out;
}

Expr from_factorization(const Factorization& f)
{
    if (f.factors.empty())
        return number(f.content);
    std::vector<Expr> parts;
    if (f.content != 1 && f.content != -1)
        parts.push_back(number(f.content));
    for (const auto& [p, m]: f.factors)
    {
        Expr base = to_expr(p);
        parts.push_back(m == 1 ? base : power(base, number(m)));
    }
    Expr product = multiply(std::move(parts));
    return f.content == -1 ? negate(product) : product;
}

Expr scaled(const Rational& k, const Expr& e)
{
    if (k == 1)
        return e;
    if (k == -1)
        return negate(e);
    return multiply({number(k), e});
}

Expr factor_polynomial_expr(const Polynomial& p)
{
    return from_factorization(factor_polynomial(p));
}

Expr solution_bindings(const std::string& x, const std::vector<RealValue>& roots)
{
    std::vector<Expr> items;
    for (const auto& r: roots)
        items.push_back(relation(RelOp::Eq, symbol(x), to_expr(r.value)));
    return solution_set(std::move(items));
}

std::vector<std::string> union_symbols(const Polynomial& a, const Polynomial& b)
{
    std::set<std::string> names;
    for (const auto* p: {&a, &b})
        for (auto& s: p->symbols())
            names.insert(s);
    return {names.begin(), names.end()};
}

} // namespace

Expr calculate(const Expr& e)
{
    require_category(e, ExprCategory::Expression, "calculate", "an expression without relations");
    auto free = e.free_symbols();
    if (!free.empty())
        fail(Errc::NonNumeric, "calculate needs a purely numeric expression, but " + join(free) +
                                   " remain; substitute values first");
    CanonicalForm f = canonicalize(e);
    return to_expr(f);
}

Expr substitute(const Expr& e, const std::vector<Expr>& conditions)
{
    auto bindings = bindings_of(conditions);
    Expr replaced = deli::substitute(e, bindings);
    switch (replaced.category())
    {
        case ExprCategory::Expression:
        case ExprCategory::Equation:
        case ExprCategory::Inequation:
            if (replaced.kind() == NodeKind::Interval)
                return replaced;
            return per_side(replaced, simplify);
        case ExprCategory::SolutionSet: break;
    }
    return replaced;
}

Expr solve_eq(const Expr& e)
{
    if (e.category() == ExprCategory::Inequation)
        fail(Errc::InvalidArgument, "solve_eq expects an equation; use solve_ineq for " + print(e));
    if (e.category() == ExprCategory::SolutionSet)
        fail(Errc::InvalidArgument, "solve_eq expects a single equation; use solve_multi_eq for systems");
    CanonicalForm f = canonicalize(e);
    auto x = single_symbol(union_symbols(f.numerator, f.denominator), "solve_eq");
    if (!x)
    {
        if (!f.numerator.is_zero())
            return solution_set({});
        auto original = single_symbol(e.free_symbols(), "solve_eq");
        if (!original)
            fail(Errc::InvalidArgument, "solve_eq received an identity without unknowns: " + print(e));
        return solution_set({interval(*original, std::nullopt, true, std::nullopt, true)});
    }
    std::vector<RealValue> roots;
    for (auto& r: real_roots(f.numerator, *x, "solve_eq"))
        if (!substitute_value(f.denominator, *x, r).is_zero())
            roots.push_back(std::move(r));
    return solution_bindings(*x, roots);
}

Expr solve_ineq(const Expr& e)
{
    std::optional<std::string> x;
    PieceSet set = solve_inequality(e, x);
    if (!x)
    {
        if (set.empty())
            return solution_set({});
        fail(Errc::InvalidArgument, "solve_ineq received an inequality without unknowns that always holds: " +
                                        print(e));
    }
    return solution_set(to_items(set, *x));
}

Expr solve_multi_eq(const std::vector<Expr>& equations)
{
    std::vector<Expr> eqs;
    for (const auto& e: equations)
    {
        if (e.category() == ExprCategory::SolutionSet)
            eqs.insert(eqs.end(), e.args().begin(), e.args().end());
        else
            eqs.push_back(e);
    }
    if (eqs.empty())
        fail(Errc::InvalidArgument, "solve_multi_eq needs at least one equation");

    std::vector<Polynomial> rows;
    std::set<std::string> names;
    for (const auto& e: eqs)
    {
        if (e.category() != ExprCategory::Equation)
            fail(Errc::InvalidArgument, "solve_multi_eq expects equations only, got " + print(e));
        CanonicalForm f = canonicalize(e);
        if (!f.is_polynomial() || f.numerator.total_degree() > 1)
            fail(Errc::NonLinearSystem, "solve_multi_eq handles linear systems only, but " + print(e) +
                                            " is not linear; try solve_eq or partial_solve");
        if (f.numerator.has_radicals())
            fail(Errc::NonLinearSystem, "solve_multi_eq supports rational coefficients only");
        for (auto& s: f.numerator.symbols())
            names.insert(s);
        rows.push_back(f.numerator);
    }
    std::vector<std::string> vars(names.begin(), names.end());
    std::size_t n = vars.size();

    // augmented matrix [A | b] for A v = b
    std::vector<std::vector<Rational>> m;
    for (const auto& p: rows)
    {
        std::vector<Rational> row(n + 1, Rational(0));
        for (const auto& [mono, c]: p.terms())
        {
            if (mono.powers.empty())
            {
                row[n] = -c;
                continue;
            }
            auto it = std::find(vars.begin(), vars.end(), mono.powers.front().first);
            row[static_cast<std::size_t>(it - vars.begin())] = c;
        }
        m.push_back(std::move(row));
    }

    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m.size(); ++col)
    {
        std::size_t sel = r;
        while (sel < m.size() && m[sel][col] == 0)
            ++sel;
        if (sel == m.size())
            continue;
        std::swap(m[r], m[sel]);
        Rational inv = Rational(1) / m[r][col];
        for (auto& v: m[r])
            v *= inv;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (i != r && m[i][col] != 0)
            {
                Rational k = m[i][col];
                for (std::size_t j = col; j <= n; ++j)
                    m[i][j] -= k * m[r][j];
            }
        pivots.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < m.size(); ++i)
        if (m[i][n] != 0)
            fail(Errc::Inconsistent, "the system has no solution: its equations contradict each other");

    std::vector<Expr> items;
    for (std::size_t i = 0; i < pivots.size(); ++i)
    {
        Polynomial value(m[i][n]);
        for (std::size_t j = 0; j < n; ++j)
            if (j != pivots[i] && m[i][j] != 0)
                value -= Polynomial::symbol(vars[j]) * m[i][j];
        items.push_back(relation(RelOp::Eq, symbol(vars[pivots[i]]), to_expr(value)));
    }
    return solution_set(std::move(items));
}

Expr solve_multi_ineq(const std::vector<Expr>& inequations)
{
    std::vector<Expr> items;
    for (const auto& e: inequations)
    {
        if (e.category() == ExprCategory::SolutionSet)
            items.insert(items.end(), e.args().begin(), e.args().end());
        else
            items.push_back(e);
    }
    if (items.empty())
        fail(Errc::InvalidArgument, "solve_multi_ineq needs at least one inequality");

    std::set<std::string> names;
    for (const auto& e: items)
        for (auto& s: e.free_symbols())
            names.insert(s);
    auto x = single_symbol({names.begin(), names.end()}, "solve_multi_ineq");

    PieceSet acc = all_reals();
    for (const auto& e: items)
    {
        std::optional<std::string> unused;
        if (e.is_relation() && e.op() == RelOp::Eq)
        {
            // an equation inside a system of constraints restricts to its roots
            CanonicalForm f = canonicalize(e);
            PieceSet points;
            if (x)
                for (auto& r: real_roots(f.numerator, *x, "solve_multi_ineq"))
                    points.push_back(Piece {r, true, r, true});
            else if (f.numerator.is_zero())
                points = all_reals();
            acc = intersect(acc, points);
            continue;
        }
        acc = intersect(acc, solve_inequality(e, unused));
    }
    if (!x)
    {
        if (acc.empty())
            return solution_set({});
        fail(Errc::InvalidArgument, "solve_multi_ineq received constraints without unknowns");
    }
    return solution_set(to_items(acc, *x));
}

Expr partial_solve(const Expr& e, const std::string& u)
{
    if (e.category() != ExprCategory::Equation && e.category() != ExprCategory::Expression)
        fail(Errc::InvalidArgument, "partial_solve expects an equation, got " + print(e));
    CanonicalForm f = canonicalize(e);
    const Polynomial& p = f.numerator;
    if (!p.contains(u))
        fail(Errc::SymbolAbsent, "partial_solve cannot solve for " + u + " because it does not appear in " + print(e));
    unsigned degree = p.degree_in(u);
    auto cs = p.coefficients_in(u);
    auto coefficient = [&](unsigned k) {
        auto it = cs.find(k);
        return it == cs.end() ? Polynomial() : it->second;
    };
    if (degree > 2)
        fail(Errc::UnsupportedDegree, "partial_solve handles equations of degree 1 or 2 in " + u + ", but " +
                                          print(e) + " has degree " + std::to_string(degree));
    if (degree == 1)
        return solution_set({relation(RelOp::Eq, symbol(u), ratio(-coefficient(0), coefficient(1)))});

    Polynomial a = coefficient(2);
    Polynomial b = coefficient(1);
    Polynomial c = coefficient(0);
    Polynomial disc = b * b - a * c * Rational(4);
    Polynomial two_a = a * Rational(2);
    std::vector<Expr> items;
    if (disc.is_zero())
        items.push_back(relation(RelOp::Eq, symbol(u), ratio(-b, two_a)));
    else if (disc.is_rational() && disc.constant_value() < 0)
        return solution_set({});
    else
    {
        std::optional<Polynomial> root;
        if (!disc.has_radicals())
        {
            Rational content = rational_content(disc);
            if (content > 0)
                if (auto s = sqrt_exact(disc * (Rational(1) / content)))
                    root = canonicalize(square_root(number(content))).numerator * *s;
        }
        // symbolic radicand: pull out a square rational content, e.g. sqrt(4a) = 2 sqrt(a)
        Rational outside(1);
        Polynomial radicand = disc;
        if (!root && !disc.has_radicals())
        {
            Rational content = rational_content(disc);
            auto n = sqrt_exact(Polynomial(Rational(num_of(content))));
            auto d = sqrt_exact(Polynomial(Rational(den_of(content))));
            if (content > 0 && n && d)
            {
                outside = n->constant_value() / d->constant_value();
                radicand = disc * (Rational(1) / content);
            }
        }
        for (int s: {-1, 1})
        {
            Expr value;
            if (root)
                value = ratio(-b + *root * Rational(s), two_a);
            else if (two_a.is_rational())
            {
                Expr r = scaled(outside / two_a.constant_value() * s, square_root(to_expr(radicand)));
                value = b.is_zero() ? r : add({ratio(-b, two_a), r});
            }
            else
            {
                Rational c = rational_content(two_a);
                Expr r = scaled(outside / c * s, square_root(to_expr(radicand)));
                Expr top = b.is_zero() ? r : add({to_expr(-b * (Rational(1) / c)), r});
                value = divide(top, to_expr(two_a * (Rational(1) / c)));
            }
            items.push_back(relation(RelOp::Eq, symbol(u), value));
        }
    }
    return solution_set(std::move(items));
}

Expr expand(const Expr& e)
{
    if (e.category() == ExprCategory::SolutionSet || e.kind() == NodeKind::Interval)
        fail(Errc::InvalidArgument, "expand expects an expression or a relation");
    return per_side(e, [](const Expr& side) { return to_expr(canonicalize(side)); });
}

Expr factor(const Expr& e)
{
    if (e.category() == ExprCategory::SolutionSet || e.kind() == NodeKind::Interval)
        fail(Errc::InvalidArgument, "factor expects an expression or a relation");
    return per_side(e, [](const Expr& side) {
        return factor_polynomial_expr(require_polynomial(side, Errc::NonPolynomial, "the input of factor"));
    });
}

Expr collect(const Expr& e, const std::string& x)
{
    if (e.category() == ExprCategory::SolutionSet || e.kind() == NodeKind::Interval)
        fail(Errc::InvalidArgument, "collect expects an expression or a relation");
    return per_side(e, [&](const Expr& side) {
        Polynomial p = require_polynomial(side, Errc::NonPolynomial, "the input of collect");
        auto cs = p.coefficients_in(x);
        std::vector<Expr> terms;
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
        {
            const auto& [k, coefficient] = *it;
            Expr c = factor_polynomial_expr(coefficient);
            if (k == 0)
            {
                terms.push_back(c);
                continue;
            }
            Expr xk = k == 1 ? symbol(x) : power(symbol(x), number(k));
            if (c.is_number() && c.number() == 1)
                terms.push_back(xk);
            else if (c.is_number() && c.number() == -1)
                terms.push_back(negate(xk));
            else
                terms.push_back(multiply({c, xk}));
        }
        return add(std::move(terms));
    });
}

Expr complete_the_square(const Expr& e)
{
    if (e.category() != ExprCategory::Expression)
        fail(Errc::NotQuadratic, "complete_the_square expects a quadratic expression such as x^2 + 2x + 3");
    CanonicalForm f;
    try
    {
        f = canonicalize(e);
    }
    catch (const MathError& err)
    {
        if (err.code() != Errc::NonRationalForm)
            throw;
        fail(Errc::NotQuadratic, std::string("complete_the_square expects a quadratic polynomial: ") + err.what());
    }
    auto names = f.numerator.symbols();
    if (!f.is_polynomial() || names.size() != 1 || f.numerator.degree_in(names[0]) != 2 ||
        f.numerator.has_radicals())
        fail(Errc::NotQuadratic, "complete_the_square expects a quadratic in one symbol with rational "
                                 "coefficients, got " + print(e));
    const std::string& x = names[0];
    auto cs = f.numerator.coefficients_in(x);
    auto coefficient = [&](unsigned k) {
        auto it = cs.find(k);
        return it == cs.end() ? Rational(0) : it->second.constant_value();
    };
    Rational a = coefficient(2);
    Rational b = coefficient(1);
    Rational c = coefficient(0);
    Rational h = b / (2 * a);
    Rational k = c - b * b / (4 * a);

    Expr inner = h == 0 ? symbol(x) : add({symbol(x), number(h)});
    Expr square = power(inner, number(2));
    Expr scaled = a == 1 ? square : a == -1 ? negate(square) : multiply({number(a), square});
    return k == 0 ? scaled : add({scaled, number(k)});
}

} // namespace deli::cas
