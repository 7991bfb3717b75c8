// SPDX-License-Identifier: Apache-2.0
#include <deli/canonical.hpp>
#include <deli/poly_algo.hpp>

#include <cmath>
#include <map>
#include <random>
#include <set>

namespace deli
{
namespace
{

constexpr unsigned kMaxExponent = 64;
constexpr int kSamplePoints = 8;
constexpr int kSampleAttempts = 200;
constexpr std::uint64_t kSampleSeed = 0x5eed0fde11ULL;

[[noreturn]] void non_rational(const std::string& why)
{
    throw MathError(Errc::NonRationalForm, why);
}

BigInt smallest_prime_factor(const BigInt& n)
{
    for (BigInt p = 2; p * p <= n && p < 1000000; ++p)
        if (n % p == 0)
            return p;
    return n;
}

CanonicalForm finish(Polynomial num, Polynomial den)
{
    if (den.is_zero())
        non_rational("division by zero");
    for (int guard = 0; den.has_radicals(); ++guard)
    {
        if (guard > 64)
            non_rational("could not rationalize the denominator");
        BigInt prime = 0;
        for (const auto& [m, _]: den.terms())
            if (m.radical != 1)
            {
                prime = smallest_prime_factor(m.radical);
                break;
            }
        Polynomial conj = den.conjugate(prime);
        num *= conj;
        den *= conj;
    }
    if (den.is_rational())
        return {num * (Rational(1) / den.constant_value()), Polynomial(Rational(1))};
    Rational lead = den.leading_coefficient();
    return {num * (Rational(1) / lead), den * (Rational(1) / lead)};
}

CanonicalForm inverse(const CanonicalForm& f)
{
    if (f.numerator.is_zero())
        non_rational("division by zero");
    return finish(f.denominator, f.numerator);
}

CanonicalForm power_of(const CanonicalForm& f, unsigned e)
{
    return finish(f.numerator.pow(e), f.denominator.pow(e));
}

Polynomial sqrt_poly(const Polynomial& p)
{
    if (p.is_zero())
        return p;
    if (p.has_radicals())
        non_rational("nested radicals are outside the supported forms");
    if (p.is_rational())
    {
        Rational c = p.constant_value();
        if (c < 0)
            non_rational("square root of a negative number");
        // sqrt(a/b) = sqrt(ab) / b
        BigInt a = num_of(c);
        BigInt b = den_of(c);
        return Polynomial::sqrt_of(a * b) * Rational(1, b);
    }
    Rational content = rational_content(p);
    if (content < 0)
        content = -content;
    auto root = sqrt_exact(p * (Rational(1) / content));
    if (!root)
        non_rational("square root of a non-square polynomial");
    return sqrt_poly(Polynomial(content)) * *root;
}

CanonicalForm sqrt_of(const CanonicalForm& f)
{
    return finish(sqrt_poly(f.numerator), sqrt_poly(f.denominator));
}

CanonicalForm canon(const Expr& e)
{
    switch (e.kind())
    {
        case NodeKind::Number: return {Polynomial(e.number()), Polynomial(Rational(1))};
        case NodeKind::Symbol: return {Polynomial::symbol(e.name()), Polynomial(Rational(1))};
        case NodeKind::Sum:
        {
            Polynomial num;
            Polynomial den(Rational(1));
            for (const auto& term: e.args())
            {
                CanonicalForm t = canon(term);
                if (t.denominator == den)
                    num += t.numerator;
                else
                {
                    num = num * t.denominator + t.numerator * den;
                    den *= t.denominator;
                }
            }
            return finish(num, den);
        }
        case NodeKind::Product:
        {
            Polynomial num(Rational(1));
            Polynomial den(Rational(1));
            for (const auto& factor: e.args())
            {
                CanonicalForm f = canon(factor);
                num *= f.numerator;
                den *= f.denominator;
            }
            return finish(num, den);
        }
        case NodeKind::Quotient:
        {
            CanonicalForm n = canon(e.arg(0));
            CanonicalForm d = inverse(canon(e.arg(1)));
            return finish(n.numerator * d.numerator, n.denominator * d.denominator);
        }
        case NodeKind::Negate:
        {
            CanonicalForm f = canon(e.arg(0));
            return {-f.numerator, f.denominator};
        }
        case NodeKind::Sqrt: return sqrt_of(canon(e.arg(0)));
        case NodeKind::Power:
        {
            CanonicalForm x = canon(e.arg(1));
            if (!x.is_polynomial() || !x.numerator.is_rational())
                non_rational("exponents must be rational constants");
            Rational k = x.numerator.constant_value();
            CanonicalForm base = canon(e.arg(0));
            if (k < 0)
            {
                base = inverse(base);
                k = -k;
            }
            BigInt p = num_of(k);
            BigInt q = den_of(k);
            if (q == 2)
                base = sqrt_of(base);
            else if (q != 1)
                non_rational("only integer and half-integer exponents are supported");
            if (p > kMaxExponent)
                non_rational("exponent too large");
            return power_of(base, p.convert_to<unsigned>());
        }
        case NodeKind::Relation:
        {
            CanonicalForm l = canon(e.arg(0));
            CanonicalForm r = canon(e.arg(1));
            if (l.denominator == r.denominator)
                return finish(l.numerator - r.numerator, l.denominator);
            return finish(l.numerator * r.denominator - r.numerator * l.denominator,
                          l.denominator * r.denominator);
        }
        case NodeKind::Interval:
        case NodeKind::Set: break;
    }
    throw MathError(Errc::InvalidArgument, "solution sets and intervals have no canonical form");
}

// Exact value of a symbol-free expression; nullopt when undefined or outside
// the supported forms.
std::optional<Polynomial> value_at(const Expr& e, const std::vector<std::pair<std::string, Expr>>& point)
{
    try
    {
        CanonicalForm f = canon(substitute(e, point));
        if (!f.numerator.is_constant() || !f.is_polynomial())
            return std::nullopt;
        return f.numerator;
    }
    catch (const MathError&)
    {
        return std::nullopt;
    }
}

double approx(const Polynomial& constant)
{
    double v = 0;
    for (const auto& [m, c]: constant.terms())
        v += to_double(c) * std::sqrt(to_double(Rational(m.radical)));
    return v;
}

enum class Scale
{
    One,      // values must agree
    Nonzero,  // proportional with any nonzero factor
    Positive, // proportional with a positive factor
};

// Compares f and g at seeded random rational points.
bool sample_compare(const Expr& f, const Expr& g, Scale scale)
{
    std::set<std::string> names;
    for (const auto* e: {&f, &g})
        for (auto& s: e->free_symbols())
            names.insert(s);

    std::mt19937_64 rng(kSampleSeed);
    std::uniform_int_distribution<int> numerator(-20, 20);
    std::uniform_int_distribution<int> denominator(1, 7);

    std::optional<std::pair<Polynomial, Polynomial>> reference;
    int valid = 0;
    for (int attempt = 0; attempt < kSampleAttempts && valid < kSamplePoints; ++attempt)
    {
        std::vector<std::pair<std::string, Expr>> point;
        for (const auto& name: names)
            point.emplace_back(name, number(Rational(numerator(rng), denominator(rng))));
        auto vf = value_at(f, point);
        auto vg = value_at(g, point);
        if (!vf || !vg)
            continue;
        ++valid;
        if (scale == Scale::One)
        {
            if (!(*vf == *vg))
                return false;
            continue;
        }
        if (vf->is_zero() != vg->is_zero())
            return false;
        if (vf->is_zero())
            continue;
        if (!reference)
        {
            if (scale == Scale::Positive && (approx(*vf) > 0) != (approx(*vg) > 0))
                return false;
            reference.emplace(*vf, *vg);
            continue;
        }
        // vf / vg == vf0 / vg0
        if (!(*vf * reference->second == *vg * reference->first))
            return false;
    }
    if (valid < kSamplePoints)
        throw MathError(Errc::Indeterminate, "could not find enough sample points where both sides are defined");
    return true;
}

bool proportional(const Polynomial& p, const Polynomial& q, bool positive)
{
    if (p.is_zero() || q.is_zero())
        return p.is_zero() && q.is_zero();
    Rational c = p.leading_coefficient() / q.leading_coefficient();
    if (!(p.leading_monomial() == q.leading_monomial()))
        return false;
    if (positive && c < 0)
        return false;
    return p == q * c;
}

bool expressions_equiv(const Expr& a, const Expr& b)
{
    try
    {
        CanonicalForm fa = canonicalize(a);
        CanonicalForm fb = canonicalize(b);
        return fa.numerator * fb.denominator == fb.numerator * fa.denominator;
    }
    catch (const MathError& err)
    {
        if (err.code() != Errc::NonRationalForm)
            throw;
    }
    return sample_compare(a, b, Scale::One);
}

bool equations_equiv(const Expr& a, const Expr& b)
{
    try
    {
        CanonicalForm fa = canonicalize(a);
        CanonicalForm fb = canonicalize(b);
        return proportional(fa.numerator * fb.denominator, fb.numerator * fa.denominator, false) ||
               proportional(fa.numerator, fb.numerator, false);
    }
    catch (const MathError& err)
    {
        if (err.code() != Errc::NonRationalForm)
            throw;
    }
    return sample_compare(subtract(a.arg(0), a.arg(1)), subtract(b.arg(0), b.arg(1)), Scale::Nonzero);
}

// An inequality as "expr > 0" or "expr >= 0".
struct Oriented
{
    Expr positive_side;
    bool strict;
};

Oriented orient(const Expr& rel)
{
    bool greater = rel.op() == RelOp::Gt || rel.op() == RelOp::Ge;
    Expr diff = greater ? subtract(rel.arg(0), rel.arg(1)) : subtract(rel.arg(1), rel.arg(0));
    return {diff, is_strict(rel.op())};
}

bool relations_ineq_equiv(const Expr& a, const Expr& b)
{
    Oriented oa = orient(a);
    Oriented ob = orient(b);
    if (oa.strict != ob.strict)
        return false;
    try
    {
        // sign(N/D) = sign(N*D)
        CanonicalForm fa = canonicalize(oa.positive_side);
        CanonicalForm fb = canonicalize(ob.positive_side);
        return proportional(fa.numerator * fa.denominator, fb.numerator * fb.denominator, true);
    }
    catch (const MathError& err)
    {
        if (err.code() != Errc::NonRationalForm)
            throw;
    }
    return sample_compare(oa.positive_side, ob.positive_side, Scale::Positive);
}

// One-sided intervals read as relations; two-sided ones stay intervals.
Expr as_relation_if_possible(const Expr& e)
{
    if (e.kind() != NodeKind::Interval)
        return e;
    const Expr* lo = e.lower();
    const Expr* hi = e.upper();
    if (lo && !hi)
        return relation(e.lower_strict() ? RelOp::Gt : RelOp::Ge, symbol(e.name()), *lo);
    if (hi && !lo)
        return relation(e.upper_strict() ? RelOp::Lt : RelOp::Le, symbol(e.name()), *hi);
    return e;
}

bool intervals_equiv(const Expr& a, const Expr& b)
{
    if (a.name() != b.name() || a.lower_strict() != b.lower_strict() || a.upper_strict() != b.upper_strict())
        return false;
    auto bound_equiv = [](const Expr* x, const Expr* y) {
        if (!x || !y)
            return x == y;
        return expressions_equiv(*x, *y);
    };
    return bound_equiv(a.lower(), b.lower()) && bound_equiv(a.upper(), b.upper());
}

bool items_equiv(const Expr& a, const Expr& b);

// A lone binding or one-variable constraint read as a one-item solution set.
std::optional<Expr> as_singleton_set(const Expr& e)
{
    if (e.kind() == NodeKind::Interval)
        return solution_set({e});
    if (!e.is_relation())
        return std::nullopt;
    const Expr& l = e.arg(0);
    const Expr& r = e.arg(1);
    if (e.op() == RelOp::Eq)
    {
        if (l.is_symbol())
            return solution_set({e});
        if (r.is_symbol())
            return solution_set({relation(RelOp::Eq, r, l)});
        return std::nullopt;
    }
    bool greater = e.op() == RelOp::Gt || e.op() == RelOp::Ge;
    if (l.is_symbol())
        return solution_set({greater ? interval(l.name(), r, is_strict(e.op()), std::nullopt, false)
                                     : interval(l.name(), std::nullopt, false, r, is_strict(e.op()))});
    if (r.is_symbol())
        return as_singleton_set(relation(flip(e.op()), r, l));
    return std::nullopt;
}

bool sets_equiv(const Expr& a, const Expr& b)
{
    auto covered = [](const Expr& x, const Expr& y) {
        for (const auto& item: x.args())
        {
            bool found = false;
            for (const auto& other: y.args())
                if (items_equiv(item, other))
                {
                    found = true;
                    break;
                }
            if (!found)
                return false;
        }
        return true;
    };
    return covered(a, b) && covered(b, a);
}

bool items_equiv(const Expr& a0, const Expr& b0)
{
    if (a0 == b0)
        return true;
    ExprCategory ca = a0.category();
    ExprCategory cb = b0.category();
    if (ca == ExprCategory::SolutionSet || cb == ExprCategory::SolutionSet)
    {
        auto a = ca == ExprCategory::SolutionSet ? std::optional<Expr>(a0) : as_singleton_set(a0);
        auto b = cb == ExprCategory::SolutionSet ? std::optional<Expr>(b0) : as_singleton_set(b0);
        if (a && b)
            return sets_equiv(*a, *b);
        // a one-item set against a constraint that does not isolate its symbol
        const Expr& set = ca == ExprCategory::SolutionSet ? a0 : b0;
        const Expr& other = ca == ExprCategory::SolutionSet ? b0 : a0;
        return other.category() != ExprCategory::SolutionSet && set.args().size() == 1 &&
               items_equiv(set.arg(0), other);
    }
    if (ca != cb)
        return false;
    switch (ca)
    {
        case ExprCategory::Expression: return expressions_equiv(a0, b0);
        case ExprCategory::Equation: return equations_equiv(a0, b0);
        case ExprCategory::Inequation:
        {
            Expr a = as_relation_if_possible(a0);
            Expr b = as_relation_if_possible(b0);
            if (a.is_relation() && b.is_relation())
                return relations_ineq_equiv(a, b);
            if (a.kind() == NodeKind::Interval && b.kind() == NodeKind::Interval)
                return intervals_equiv(a, b);
            return false;
        }
        case ExprCategory::SolutionSet: break;
    }
    return false;
}

} // namespace

CanonicalForm canonicalize(const Expr& e)
{
    return canon(e);
}

std::optional<Polynomial> as_polynomial(const Expr& e)
{
    CanonicalForm f = canonicalize(e);
    if (!f.is_polynomial())
        return std::nullopt;
    return f.numerator;
}

bool is_equiv(const Expr& a, const Expr& b)
{
    return items_equiv(a, b);
}

Expr to_expr(const Polynomial& p)
{
    std::vector<Expr> terms;
    for (const auto& [m, c]: p.terms())
    {
        std::vector<Expr> factors;
        if (m.radical != 1)
            factors.push_back(square_root(number(Rational(m.radical))));
        for (const auto& [name, e]: m.powers)
            factors.push_back(e == 1 ? symbol(name) : power(symbol(name), number(Rational(e))));
        if (factors.empty())
            terms.push_back(number(c));
        else if (c == 1)
            terms.push_back(multiply(std::move(factors)));
        else if (c == -1)
            terms.push_back(negate(multiply(std::move(factors))));
        else
        {
            factors.insert(factors.begin(), number(c));
            terms.push_back(multiply(std::move(factors)));
        }
    }
    return add(std::move(terms));
}

Expr to_expr(const CanonicalForm& f)
{
    if (f.is_polynomial())
        return to_expr(f.numerator);
    return divide(to_expr(f.numerator), to_expr(f.denominator));
}

} // namespace deli
