// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <deli/poly_algo.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace deli::cas::detail
{

void fail(Errc code, const std::string& message)
{
    throw MathError(code, message);
}

std::string join(const std::vector<std::string>& items, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? sep : "") + items[i];
    return out;
}

Expr simplify(const Expr& e)
{
    try
    {
        return to_expr(canonicalize(e));
    }
    catch (const MathError& err)
    {
        if (err.code() != Errc::NonRationalForm)
            throw;
        return e;
    }
}

Polynomial require_polynomial(const Expr& e, Errc code, const std::string& what)
{
    CanonicalForm f;
    try
    {
        f = canonicalize(e);
    }
    catch (const MathError& err)
    {
        if (err.code() != Errc::NonRationalForm)
            throw;
        fail(code, what + " must be a polynomial (" + err.what() + ")");
    }
    if (!f.is_polynomial())
        fail(code, what + " must be a polynomial, but " + print(e) + " has a variable denominator");
    return f.numerator;
}

namespace
{

long double approximate(const Polynomial& constant)
{
    using Float = boost::multiprecision::cpp_bin_float_50;
    Float total = 0;
    for (const auto& [m, c]: constant.terms())
        total += Float(c) * sqrt(Float(m.radical));
    return total.convert_to<long double>();
}

Polynomial divide_constants(const Polynomial& a, const Polynomial& b)
{
    return canonicalize(divide(to_expr(a), to_expr(b))).numerator;
}

void quadratic_roots(const Polynomial& a, const Polynomial& b, const Polynomial& c, std::vector<RealValue>& out,
                     const std::string& caller)
{
    Polynomial disc = b * b - a * c * Rational(4);
    if (disc.has_radicals())
        fail(Errc::UnsupportedDegree, caller + " cannot solve quadratics with irrational coefficients");
    Rational d = disc.constant_value();
    if (d < 0)
        return;
    Expr two_a = to_expr(a * Rational(2));
    if (d == 0)
    {
        out.push_back(RealValue::of(divide_constants(-b, a * Rational(2))));
        return;
    }
    for (int s: {-1, 1})
    {
        Expr root = square_root(number(d));
        Expr num = add({negate(to_expr(b)), s < 0 ? negate(root) : root});
        out.push_back(RealValue::of(canonicalize(divide(num, two_a)).numerator));
    }
}

} // namespace

RealValue RealValue::of(Polynomial constant)
{
    RealValue v;
    v.approx = approximate(constant);
    v.value = std::move(constant);
    return v;
}

int sign(const Polynomial& constant)
{
    if (constant.is_zero())
        return 0;
    if (constant.is_rational())
        return constant.constant_value() > 0 ? 1 : -1;
    // a nonzero combination of distinct square roots is never zero
    return approximate(constant) > 0 ? 1 : -1;
}

int compare(const RealValue& a, const RealValue& b)
{
    if (a.value == b.value)
        return 0;
    if (a.value.is_rational() && b.value.is_rational())
        return a.value.constant_value() < b.value.constant_value() ? -1 : 1;
    return sign(a.value - b.value);
}

std::vector<RealValue> real_roots(const Polynomial& p, const std::string& x, const std::string& caller)
{
    unsigned degree = p.degree_in(x);
    std::vector<RealValue> roots;
    if (degree == 0)
        return roots;
    auto coefficient = [](const std::map<unsigned, Polynomial>& cs, unsigned k) {
        auto it = cs.find(k);
        return it == cs.end() ? Polynomial() : it->second;
    };

    if (p.has_radicals())
    {
        auto cs = p.coefficients_in(x);
        if (degree == 1)
            roots.push_back(RealValue::of(divide_constants(-coefficient(cs, 0), coefficient(cs, 1))));
        else if (degree == 2)
            quadratic_roots(coefficient(cs, 2), coefficient(cs, 1), coefficient(cs, 0), roots, caller);
        else
            fail(Errc::UnsupportedDegree, caller + " supports irrational coefficients only up to degree 2");
    }
    else
    {
        Polynomial rest = p;
        Polynomial var = Polynomial::symbol(x);
        for (const auto& [r, multiplicity]: rational_roots(p, x))
        {
            roots.push_back(RealValue::of(r));
            for (unsigned i = 0; i < multiplicity; ++i)
                rest = *Polynomial::divide_exact(rest, var - Polynomial(r));
        }
        unsigned left = rest.degree_in(x);
        auto cs = rest.coefficients_in(x);
        if (left == 2)
            quadratic_roots(coefficient(cs, 2), coefficient(cs, 1), coefficient(cs, 0), roots, caller);
        else if (left >= 3)
            fail(Errc::UnsupportedDegree, caller + " handles degree 2 and higher degrees that split into rational "
                                                   "roots, but " + print(to_expr(rest)) + " does not");
    }
    std::sort(roots.begin(), roots.end(), [](const RealValue& a, const RealValue& b) { return compare(a, b) < 0; });
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](const RealValue& a, const RealValue& b) { return compare(a, b) == 0; }),
                roots.end());
    return roots;
}

Polynomial substitute_value(const Polynomial& p, const std::string& x, const RealValue& v)
{
    return p.substitute(x, v.value);
}

std::optional<std::string> single_symbol(const std::vector<std::string>& symbols, const std::string& caller)
{
    if (symbols.empty())
        return std::nullopt;
    if (symbols.size() > 1)
        fail(Errc::NotUnivariate, caller + " needs exactly one unknown, but the input contains " + join(symbols) +
                                      "; use partial_solve(equation, unknown) to solve for one of them");
    return symbols.front();
}

PieceSet all_reals()
{
    return {Piece {}};
}

PieceSet intersect(const PieceSet& a, const PieceSet& b)
{
    PieceSet out;
    for (const auto& p: a)
        for (const auto& q: b)
        {
            Piece r;
            if (!p.lo || !q.lo)
            {
                r.lo = p.lo ? p.lo : q.lo;
                r.lo_closed = p.lo ? p.lo_closed : q.lo_closed;
            }
            else
            {
                int c = compare(*p.lo, *q.lo);
                r.lo = c >= 0 ? p.lo : q.lo;
                r.lo_closed = c > 0 ? p.lo_closed : c < 0 ? q.lo_closed : (p.lo_closed && q.lo_closed);
            }
            if (!p.hi || !q.hi)
            {
                r.hi = p.hi ? p.hi : q.hi;
                r.hi_closed = p.hi ? p.hi_closed : q.hi_closed;
            }
            else
            {
                int c = compare(*p.hi, *q.hi);
                r.hi = c <= 0 ? p.hi : q.hi;
                r.hi_closed = c < 0 ? p.hi_closed : c > 0 ? q.hi_closed : (p.hi_closed && q.hi_closed);
            }
            if (r.lo && r.hi)
            {
                int c = compare(*r.lo, *r.hi);
                if (c > 0 || (c == 0 && !(r.lo_closed && r.hi_closed)))
                    continue;
            }
            out.push_back(std::move(r));
        }
    return out;
}

std::vector<Expr> to_items(const PieceSet& set, const std::string& x)
{
    std::vector<Expr> items;
    for (const auto& p: set)
    {
        if (p.lo && p.hi && compare(*p.lo, *p.hi) == 0)
        {
            items.push_back(relation(RelOp::Eq, symbol(x), to_expr(p.lo->value)));
            continue;
        }
        std::optional<Expr> lo;
        std::optional<Expr> hi;
        if (p.lo)
            lo = to_expr(p.lo->value);
        if (p.hi)
            hi = to_expr(p.hi->value);
        items.push_back(interval(x, lo, !p.lo_closed, hi, !p.hi_closed));
    }
    return items;
}

namespace
{

RealValue constant_bound(const Expr& e)
{
    CanonicalForm f = canonicalize(e);
    if (!f.is_polynomial() || !f.numerator.is_constant())
        fail(Errc::InvalidArgument, "interval bounds must be numbers, got " + print(e));
    return RealValue::of(f.numerator);
}

Rational between(const RealValue& a, const RealValue& b)
{
    if (a.value.is_rational() && b.value.is_rational())
        return (a.value.constant_value() + b.value.constant_value()) / 2;
    return Rational(static_cast<double>((a.approx + b.approx) / 2));
}

bool satisfies(RelOp op, int s)
{
    return (op == RelOp::Gt || op == RelOp::Ge) ? s > 0 : s < 0;
}

} // namespace

PieceSet solve_inequality(const Expr& e, std::optional<std::string>& x)
{
    if (e.kind() == NodeKind::Interval)
    {
        x = e.name();
        Piece p;
        if (e.lower())
        {
            p.lo = constant_bound(*e.lower());
            p.lo_closed = !e.lower_strict();
        }
        if (e.upper())
        {
            p.hi = constant_bound(*e.upper());
            p.hi_closed = !e.upper_strict();
        }
        return intersect({p}, all_reals());
    }
    if (!e.is_relation() || e.op() == RelOp::Eq)
        fail(Errc::InvalidArgument, "solve_ineq expects an inequality such as 2x - 4 > 0, got " + print(e) +
                                        (e.is_relation() ? "; use solve_eq for equations" : ""));

    CanonicalForm f = canonicalize(e);
    const Polynomial& num = f.numerator;
    const Polynomial& den = f.denominator;
    std::set<std::string> names;
    for (const auto* p: {&num, &den})
        for (auto& s: p->symbols())
            names.insert(s);
    x = single_symbol({names.begin(), names.end()}, "solve_ineq");
    RelOp op = e.op();
    bool strict = is_strict(op);
    Polynomial product = num * den;

    if (!x)
    {
        x = single_symbol(e.free_symbols(), "solve_ineq");
        int s = sign(product);
        bool holds = satisfies(op, s) || (!strict && s == 0);
        return holds ? all_reals() : PieceSet {};
    }

    std::vector<RealValue> crit = real_roots(num, *x, "solve_ineq");
    for (auto& r: real_roots(den, *x, "solve_ineq"))
        crit.push_back(std::move(r));
    std::sort(crit.begin(), crit.end(), [](const RealValue& a, const RealValue& b) { return compare(a, b) < 0; });
    crit.erase(std::unique(crit.begin(), crit.end(),
                           [](const RealValue& a, const RealValue& b) { return compare(a, b) == 0; }),
               crit.end());

    auto segment_holds = [&](std::size_t j) {
        Rational t;
        if (crit.empty())
            t = 0;
        else if (j == 0)
            t = Rational(static_cast<long long>(std::floor(static_cast<double>(crit.front().approx))) - 1);
        else if (j == crit.size())
            t = Rational(static_cast<long long>(std::ceil(static_cast<double>(crit.back().approx))) + 1);
        else
            t = between(crit[j - 1], crit[j]);
        return satisfies(op, sign(product.evaluate({{*x, t}})));
    };
    auto point_holds = [&](std::size_t j) {
        if (strict)
            return false;
        return substitute_value(num, *x, crit[j]).is_zero() && !substitute_value(den, *x, crit[j]).is_zero();
    };

    // seg0, pt0, seg1, pt1, ..., seg_k
    struct Element
    {
        bool holds;
        bool point;
        std::size_t index;
    };
    std::vector<Element> line;
    for (std::size_t j = 0; j <= crit.size(); ++j)
    {
        line.push_back({segment_holds(j), false, j});
        if (j < crit.size())
            line.push_back({point_holds(j), true, j});
    }

    PieceSet out;
    std::optional<Piece> open;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        const Element& el = line[i];
        if (el.holds && !open)
        {
            open.emplace();
            if (el.point)
            {
                open->lo = crit[el.index];
                open->lo_closed = true;
            }
            else if (el.index > 0)
                open->lo = crit[el.index - 1];
        }
        bool ends = el.holds && (i + 1 == line.size() || !line[i + 1].holds);
        if (ends)
        {
            if (el.point)
            {
                open->hi = crit[el.index];
                open->hi_closed = true;
            }
            else if (el.index < crit.size())
                open->hi = crit[el.index];
            out.push_back(std::move(*open));
            open.reset();
        }
    }
    return out;
}

Expr ratio(const Polynomial& num0, const Polynomial& den0)
{
    if (num0.is_zero())
        return number(0);
    Polynomial num = num0;
    Polynomial den = den0;
    if (!num.has_radicals() && !den.has_radicals() && !den.is_constant())
    {
        Polynomial g = gcd(num, den);
        if (!g.is_constant())
        {
            num = *Polynomial::divide_exact(num, g);
            den = *Polynomial::divide_exact(den, g);
        }
    }
    if (den.is_constant())
        return to_expr(canonicalize(divide(to_expr(num), to_expr(den))));
    Rational c = rational_content(den);
    num *= Rational(1) / c;
    den *= Rational(1) / c;
    return divide(to_expr(num), to_expr(den));
}

} // namespace deli::cas::detail
