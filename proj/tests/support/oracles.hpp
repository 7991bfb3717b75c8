// SPDX-License-Identifier: Apache-2.0
// Independent reference implementations used to check the library. They
// share nothing with src/ beyond the Expr factories used to build inputs.
#pragma once

#include <deli/expr.hpp>
#include <deli/polynomial.hpp>

#include <array>
#include <stdexcept>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace deli::oracle
{

// Dense-exponent polynomial over x, y, z with naive expansion.
struct Poly
{
    using Exps = std::array<unsigned, 3>;
    std::map<Exps, Rational> terms;

    static Poly constant(const Rational& c)
    {
        Poly p;
        if (c != 0)
            p.terms[{0, 0, 0}] = c;
        return p;
    }

    static Poly var(int index)
    {
        Poly p;
        Exps e {0, 0, 0};
        e[index] = 1;
        p.terms[e] = 1;
        return p;
    }

    Poly operator+(const Poly& o) const
    {
        Poly r = *this;
        for (const auto& [e, c]: o.terms)
        {
            r.terms[e] += c;
            if (r.terms[e] == 0)
                r.terms.erase(e);
        }
        return r;
    }

    Poly operator-() const
    {
        Poly r = *this;
        for (auto& [_, c]: r.terms)
            c = -c;
        return r;
    }

    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const
    {
        Poly r;
        for (const auto& [ea, ca]: terms)
            for (const auto& [eb, cb]: o.terms)
            {
                Exps e {ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
                r.terms[e] += ca * cb;
                if (r.terms[e] == 0)
                    r.terms.erase(e);
            }
        return r;
    }

    bool operator==(const Poly& o) const { return terms == o.terms; }
};

inline const std::array<std::string, 3>& names()
{
    static const std::array<std::string, 3> n {"x", "y", "z"};
    return n;
}

// Reads a library polynomial into the oracle representation (no radicals).
inline Poly from_library(const Polynomial& p)
{
    Poly out;
    for (const auto& [m, c]: p.terms())
    {
        Poly::Exps e {0, 0, 0};
        for (const auto& [name, k]: m.powers)
            for (int i = 0; i < 3; ++i)
                if (names()[i] == name)
                    e[i] = k;
        out.terms[e] = c;
    }
    return out;
}

// Expr built alongside its oracle expansion.
struct Sample
{
    Expr expr;
    Poly poly;
};

// Tree expansion written directly over Expr nodes, independent of the
// library's canonicalizer. Handles polynomial trees and division by numbers.
inline Poly expand_tree(const Expr& e)
{
    switch (e.kind())
    {
        case NodeKind::Number: return Poly::constant(e.number());
        case NodeKind::Symbol:
            for (int i = 0; i < 3; ++i)
                if (names()[i] == e.name())
                    return Poly::var(i);
            throw std::invalid_argument("oracle: unknown symbol " + e.name());
        case NodeKind::Sum:
        {
            Poly r;
            for (const auto& a: e.args())
                r = r + expand_tree(a);
            return r;
        }
        case NodeKind::Product:
        {
            Poly r = Poly::constant(1);
            for (const auto& a: e.args())
                r = r * expand_tree(a);
            return r;
        }
        case NodeKind::Negate: return -expand_tree(e.arg(0));
        case NodeKind::Power:
        {
            const Expr& k = e.arg(1);
            if (!k.is_number() || k.number() < 0 || denominator(k.number()) != 1)
                throw std::invalid_argument("oracle: non-polynomial power");
            Poly base = expand_tree(e.arg(0));
            Poly r = Poly::constant(1);
            for (BigInt i = 0; i < numerator(k.number()); ++i)
                r = r * base;
            return r;
        }
        case NodeKind::Quotient:
        {
            const Expr& d = e.arg(1);
            if (!d.is_number())
                throw std::invalid_argument("oracle: division by a non-number");
            return expand_tree(e.arg(0)) * Poly::constant(1 / d.number());
        }
        default: throw std::invalid_argument("oracle: unsupported node");
    }
}

// a + b*sqrt(d) with d squarefree; d = 1 means no radical in use.
struct Quad
{
    Rational a = 0;
    Rational b = 0;
    BigInt d = 1;

    static Quad of(const Rational& r) { return {r, 0, 1}; }

    static BigInt join(const Quad& x, const Quad& y)
    {
        BigInt dx = x.b == 0 ? BigInt(1) : x.d;
        BigInt dy = y.b == 0 ? BigInt(1) : y.d;
        if (dx != 1 && dy != 1 && dx != dy)
            throw std::invalid_argument("oracle: mixed radicals");
        return dx != 1 ? dx : dy;
    }

    Quad operator+(const Quad& o) const { return {a + o.a, b + o.b, join(*this, o)}; }
    Quad operator-() const { return {-a, -b, d}; }
    Quad operator-(const Quad& o) const { return *this + (-o); }
    Quad operator*(const Quad& o) const
    {
        BigInt k = join(*this, o);
        return {a * o.a + b * o.b * Rational(k), a * o.b + b * o.a, k};
    }
    Quad inverse() const
    {
        Rational norm = a * a - b * b * Rational(d);
        if (norm == 0)
            throw std::domain_error("oracle: division by zero");
        return {a / norm, -b / norm, d};
    }
    bool is_zero() const { return a == 0 && b == 0; }

    // exact sign of a + b sqrt(d)
    int sign() const
    {
        auto sg = [](const Rational& r) { return r > 0 ? 1 : r < 0 ? -1 : 0; };
        if (b == 0 || d == 1)
            return sg(a + b);
        int sa = sg(a);
        int sb = sg(b);
        if (sa == 0 || sa == sb)
            return sa == 0 ? sb : sa;
        // opposite signs: compare a^2 with b^2 d
        Rational diff = a * a - b * b * Rational(d);
        return diff == 0 ? 0 : (diff > 0 ? sa : sb);
    }
};

inline Quad quad_sqrt(const Quad& q)
{
    if (q.b != 0 || q.a < 0)
        throw std::invalid_argument("oracle: sqrt of a non-rational or negative value");
    BigInt n = numerator(q.a) * denominator(q.a);
    BigInt square = 1;
    BigInt rest = 1;
    for (BigInt p = 2; p * p <= n; ++p)
        while (n % p == 0)
        {
            n /= p;
            if (n % p == 0)
            {
                n /= p;
                square *= p;
            }
            else
                rest *= p;
        }
    rest *= n;
    Rational scale(square, denominator(q.a));
    if (rest == 1)
        return Quad::of(scale);
    return {0, scale, rest};
}

inline Quad evaluate(const Expr& e, const std::map<std::string, Quad>& at)
{
    switch (e.kind())
    {
        case NodeKind::Number: return Quad::of(e.number());
        case NodeKind::Symbol:
        {
            auto it = at.find(e.name());
            if (it == at.end())
                throw std::invalid_argument("oracle: unbound symbol " + e.name());
            return it->second;
        }
        case NodeKind::Sum:
        {
            Quad r;
            for (const auto& a: e.args())
                r = r + evaluate(a, at);
            return r;
        }
        case NodeKind::Product:
        {
            Quad r = Quad::of(1);
            for (const auto& a: e.args())
                r = r * evaluate(a, at);
            return r;
        }
        case NodeKind::Negate: return -evaluate(e.arg(0), at);
        case NodeKind::Quotient: return evaluate(e.arg(0), at) * evaluate(e.arg(1), at).inverse();
        case NodeKind::Sqrt: return quad_sqrt(evaluate(e.arg(0), at));
        case NodeKind::Power:
        {
            const Expr& k = e.arg(1);
            if (!k.is_number() || denominator(k.number()) != 1)
                throw std::invalid_argument("oracle: non-integer exponent");
            Quad base = evaluate(e.arg(0), at);
            BigInt n = abs(numerator(k.number()));
            Quad r = Quad::of(1);
            for (BigInt i = 0; i < n; ++i)
                r = r * base;
            return k.number() < 0 ? r.inverse() : r;
        }
        default: throw std::invalid_argument("oracle: cannot evaluate this node");
    }
}

// lhs - rhs of a relation, evaluated.
inline Quad evaluate_difference(const Expr& relation, const std::map<std::string, Quad>& at)
{
    return evaluate(relation.arg(0), at) - evaluate(relation.arg(1), at);
}

// Whether a relation, interval or solution set is satisfied at a point.
inline bool holds(const Expr& e, const std::map<std::string, Quad>& at)
{
    switch (e.kind())
    {
        case NodeKind::Set:
            for (const auto& item: e.args())
                if (holds(item, at))
                    return true;
            return false;
        case NodeKind::Interval:
        {
            Quad x = at.at(e.name());
            if (const Expr* lo = e.lower())
            {
                int s = (x - evaluate(*lo, at)).sign();
                if (s < 0 || (s == 0 && e.lower_strict()))
                    return false;
            }
            if (const Expr* hi = e.upper())
            {
                int s = (evaluate(*hi, at) - x).sign();
                if (s < 0 || (s == 0 && e.upper_strict()))
                    return false;
            }
            return true;
        }
        case NodeKind::Relation:
        {
            int s = evaluate_difference(e, at).sign();
            switch (e.op())
            {
                case RelOp::Eq: return s == 0;
                case RelOp::Lt: return s < 0;
                case RelOp::Le: return s <= 0;
                case RelOp::Gt: return s > 0;
                case RelOp::Ge: return s >= 0;
            }
            return false;
        }
        default: throw std::invalid_argument("oracle: not a condition");
    }
}

class Generator
{
public:
    explicit Generator(std::uint64_t seed, int variables = 3): rng_(seed), variables_(variables) {}

    Rational small_rational(int span = 9, int max_den = 4)
    {
        std::uniform_int_distribution<int> n(-span, span);
        std::uniform_int_distribution<int> d(1, max_den);
        return Rational(n(rng_), d(rng_));
    }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    // Sum of random monomials, total degree <= max_degree.
    Sample polynomial(unsigned max_degree, int max_terms = 5)
    {
        int count = uniform(1, max_terms);
        std::vector<Expr> terms;
        Poly poly;
        for (int t = 0; t < count; ++t)
        {
            Rational c = small_rational();
            if (c == 0)
                c = 1;
            std::vector<Expr> factors {number(c)};
            Poly term = Poly::constant(c);
            unsigned budget = static_cast<unsigned>(uniform(0, static_cast<int>(max_degree)));
            for (int v = 0; v < variables_ && budget > 0; ++v)
            {
                unsigned k = static_cast<unsigned>(uniform(0, static_cast<int>(budget)));
                budget -= k;
                if (k == 0)
                    continue;
                factors.push_back(k == 1 ? symbol(names()[v]) : power(symbol(names()[v]), number(k)));
                for (unsigned i = 0; i < k; ++i)
                    term = term * Poly::var(v);
            }
            terms.push_back(multiply(std::move(factors)));
            poly = poly + term;
        }
        return {add(std::move(terms)), poly};
    }

    // Random unexpanded tree: products and small powers of polynomials.
    Sample tree(int depth)
    {
        if (depth <= 0)
            return polynomial(2, 3);
        switch (uniform(0, 3))
        {
            case 0:
            {
                Sample a = tree(depth - 1);
                Sample b = tree(depth - 1);
                return {add({a.expr, b.expr}), a.poly + b.poly};
            }
            case 1:
            {
                Sample a = tree(depth - 1);
                Sample b = tree(depth - 1);
                return {multiply({a.expr, b.expr}), a.poly * b.poly};
            }
            case 2:
            {
                Sample a = tree(depth - 1);
                return {power(a.expr, number(2)), a.poly * a.poly};
            }
            default:
            {
                Sample a = tree(depth - 1);
                return {negate(a.expr), -a.poly};
            }
        }
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    int variables_;
};

} // namespace deli::oracle
