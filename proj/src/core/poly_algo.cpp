// SPDX-License-Identifier: Apache-2.0
#include <deli/poly_algo.hpp>

#include <algorithm>
#include <stdexcept>

namespace deli
{

namespace
{

Polynomial divide_or_throw(const Polynomial& a, const Polynomial& b)
{
    auto q = Polynomial::divide_exact(a, b);
    if (!q)
        throw std::logic_error("inexact polynomial division: " + a.debug_string() + " / " + b.debug_string());
    return *q;
}

Polynomial leading_coefficient_in(const Polynomial& p, const std::string& symbol)
{
    auto coefficients = p.coefficients_in(symbol);
    return coefficients.rbegin()->second;
}

std::string pick_symbol(const Polynomial& p)
{
    std::string best;
    unsigned best_degree = 0;
    for (const auto& name: p.symbols())
    {
        unsigned d = p.degree_in(name);
        if (best.empty() || d < best_degree)
        {
            best = name;
            best_degree = d;
        }
    }
    return best;
}

/// Yun's square-free decomposition with respect to `symbol`; p primitive in it.
std::vector<std::pair<Polynomial, unsigned>> squarefree_parts(const Polynomial& p, const std::string& symbol)
{
    std::vector<std::pair<Polynomial, unsigned>> parts;
    Polynomial derivative = p.derivative(symbol);
    Polynomial common = gcd(p, derivative);
    if (common.is_constant())
        return {{p, 1}};

    Polynomial w = divide_or_throw(p, common);
    Polynomial y = divide_or_throw(derivative, common);
    Polynomial z = y - w.derivative(symbol);
    unsigned index = 1;
    unsigned guard = p.degree_in(symbol) + 2;
    while (w.degree_in(symbol) > 0 && guard-- > 0)
    {
        Polynomial g = gcd(w, z);
        if (g.degree_in(symbol) > 0)
            parts.emplace_back(g, index);
        w = divide_or_throw(w, g);
        y = divide_or_throw(z, g);
        z = y - w.derivative(symbol);
        ++index;
    }
    return parts;
}

using Dense = std::vector<Rational>; // index = degree

Rational evaluate_dense(const Dense& c, const Rational& x)
{
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Dense deflate(const Dense& c, const Rational& root)
{
    Dense out(c.size() - 1);
    Rational carry = 0;
    for (std::size_t i = c.size() - 1; i > 0; --i)
    {
        carry = carry * root + c[i];
        out[i - 1] = carry;
    }
    return out;
}

std::vector<BigInt> divisors(BigInt n)
{
    n = boost::multiprecision::abs(n);
    std::vector<BigInt> small;
    std::vector<BigInt> large;
    for (BigInt d = 1; d * d <= n; ++d)
        if (n % d == 0)
        {
            small.push_back(d);
            if (d * d != n)
                large.push_back(n / d);
        }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

void factor_into(const Polynomial& q, unsigned multiplicity, std::vector<std::pair<Polynomial, unsigned>>& out)
{
    if (q.is_constant())
        return;
    std::string v = pick_symbol(q);

    Polynomial content = content_in(q, v);
    if (!content.is_constant())
    {
        factor_into(content, multiplicity, out);
        factor_into(divide_or_throw(q, content), multiplicity, out);
        return;
    }

    auto parts = squarefree_parts(q, v);
    if (parts.size() > 1 || parts.front().second > 1)
    {
        for (const auto& [part, m]: parts)
            factor_into(part, multiplicity * m, out);
        return;
    }

    unsigned degree = q.degree_in(v);
    if (degree == 1)
    {
        out.emplace_back(q, multiplicity);
        return;
    }

    if (q.symbols().size() == 1)
    {
        Polynomial rest = q;
        for (const auto& [root, _]: rational_roots(q, v))
        {
            Polynomial linear = Polynomial::symbol(v) * Rational(den_of(root)) - Polynomial(Rational(num_of(root)));
            rest = divide_or_throw(rest, linear);
            out.emplace_back(linear, multiplicity);
        }
        if (!rest.is_constant())
            out.emplace_back(rest, multiplicity);
        return;
    }

    if (degree == 2)
    {
        auto coefficients = q.coefficients_in(v);
        Polynomial a = coefficients[2];
        Polynomial b = coefficients.count(1) ? coefficients[1] : Polynomial();
        Polynomial c = coefficients.count(0) ? coefficients[0] : Polynomial();
        Polynomial discriminant = b * b - a * c * Rational(4);
        if (auto root = sqrt_exact(discriminant))
        {
            Polynomial lead = a * Polynomial::symbol(v) * Rational(2) + b;
            for (Polynomial f: {lead - *root, lead + *root})
            {
                f = divide_or_throw(f, content_in(f, v));
                out.emplace_back(f, multiplicity);
            }
            return;
        }
    }
    // TODO: multivariate factors of degree >= 3 in every symbol (e.g. x^3 + y^3) need Hensel lifting; kept whole.
    out.emplace_back(q, multiplicity);
}

} // namespace

Rational rational_content(const Polynomial& p)
{
    if (p.is_zero())
        return 0;
    BigInt g = 0;
    BigInt l = 1;
    for (const auto& [_, c]: p.terms())
    {
        g = gcd(g, num_of(c));
        l = lcm(l, den_of(c));
    }
    Rational content(g, l);
    if (p.leading_coefficient() < 0)
        content = -content;
    return content;
}

Polynomial normalize(const Polynomial& p)
{
    if (p.is_zero())
        return p;
    return p * (Rational(1) / rational_content(p));
}

Polynomial content_in(const Polynomial& p, const std::string& symbol)
{
    if (!p.contains(symbol))
        return normalize(p);
    Polynomial g;
    for (const auto& [_, coefficient]: p.coefficients_in(symbol))
    {
        g = gcd(g, coefficient);
        if (g.is_constant())
            return Polynomial(Rational(1));
    }
    return g;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, const std::string& symbol)
{
    unsigned db = b.degree_in(symbol);
    Polynomial lcb = leading_coefficient_in(b, symbol);
    Polynomial r = a;
    while (!r.is_zero() && r.degree_in(symbol) >= db)
    {
        unsigned dr = r.degree_in(symbol);
        Polynomial lcr = leading_coefficient_in(r, symbol);
        Monomial shift;
        if (dr > db)
            shift.powers.emplace_back(symbol, dr - db);
        r = r * lcb - lcr * Polynomial::monomial(shift, Rational(1)) * b;
    }
    return r;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero())
        return normalize(b);
    if (b.is_zero())
        return normalize(a);
    if (a.is_constant() || b.is_constant())
        return Polynomial(Rational(1));

    auto sa = a.symbols();
    auto sb = b.symbols();
    std::string v = std::min(sa.front(), sb.front());
    if (!a.contains(v))
        return gcd(a, content_in(b, v));
    if (!b.contains(v))
        return gcd(content_in(a, v), b);

    Polynomial ca = content_in(a, v);
    Polynomial cb = content_in(b, v);
    Polynomial pa = divide_or_throw(a, ca);
    Polynomial pb = divide_or_throw(b, cb);
    Polynomial common = gcd(ca, cb);
    if (pa.degree_in(v) < pb.degree_in(v))
        std::swap(pa, pb);

    while (!pb.is_zero())
    {
        Polynomial r = pseudo_remainder(pa, pb, v);
        pa = pb;
        if (r.is_zero())
            break;
        if (r.degree_in(v) == 0)
        {
            pa = Polynomial(Rational(1));
            break;
        }
        pb = divide_or_throw(r, content_in(r, v));
    }
    if (!pa.is_constant())
        pa = divide_or_throw(pa, content_in(pa, v));
    return normalize(common * pa);
}

std::optional<Polynomial> sqrt_exact(const Polynomial& p)
{
    if (p.is_zero())
        return Polynomial();
    if (p.has_radicals())
        return std::nullopt;
    if (p.is_rational())
    {
        Rational root;
        if (!rational_sqrt(p.constant_value(), root))
            return std::nullopt;
        return Polynomial(root);
    }

    const Monomial& lead = p.leading_monomial();
    Rational lead_root;
    if (!rational_sqrt(p.leading_coefficient(), lead_root))
        return std::nullopt;
    Monomial half;
    for (const auto& [name, e]: lead.powers)
    {
        if (e % 2 != 0)
            return std::nullopt;
        half.powers.emplace_back(name, e / 2);
    }
    Polynomial head = Polynomial::monomial(half, lead_root);
    Polynomial root = head;
    Polynomial residual = p - root * root;
    std::size_t guard = 2 * p.size() + 8;
    while (!residual.is_zero())
    {
        if (guard-- == 0)
            return std::nullopt;
        Polynomial lead_residual = Polynomial::monomial(residual.leading_monomial(), residual.leading_coefficient());
        auto step = Polynomial::divide_exact(lead_residual, head * Rational(2));
        if (!step || step->is_zero() || MonomialOrder {}(step->leading_monomial(), half) ||
            step->leading_monomial() == half)
            return std::nullopt;
        root += *step;
        residual = p - root * root;
    }
    return root;
}

std::vector<std::pair<Rational, unsigned>> rational_roots(const Polynomial& p, const std::string& symbol)
{
    std::vector<std::pair<Rational, unsigned>> roots;
    if (p.is_zero() || p.has_radicals())
        return roots;
    auto coefficients = p.coefficients_in(symbol);
    for (const auto& [_, c]: coefficients)
        if (!c.is_rational())
            return roots;

    Dense dense(p.degree_in(symbol) + 1);
    for (const auto& [e, c]: coefficients)
        dense[e] = c.constant_value();

    unsigned zero_multiplicity = 0;
    while (dense.size() > 1 && dense.front() == 0)
    {
        dense.erase(dense.begin());
        ++zero_multiplicity;
    }
    if (zero_multiplicity > 0)
        roots.emplace_back(Rational(0), zero_multiplicity);

    if (dense.size() > 1)
    {
        BigInt scale = 1;
        for (const auto& c: dense)
            scale = lcm(scale, den_of(c));
        BigInt a0 = num_of(dense.front() * Rational(scale));
        BigInt an = num_of(dense.back() * Rational(scale));
        const BigInt limit("1000000000000");
        if (boost::multiprecision::abs(a0) <= limit && boost::multiprecision::abs(an) <= limit)
        {
            for (const auto& num: divisors(a0))
                for (const auto& den: divisors(an))
                    for (int sign: {-1, 1})
                    {
                        Rational candidate(BigInt(sign) * num, den);
                        if (std::any_of(roots.begin(), roots.end(), [&](const auto& r) { return r.first == candidate; }))
                            continue;
                        unsigned multiplicity = 0;
                        while (dense.size() > 1 && evaluate_dense(dense, candidate) == 0)
                        {
                            dense = deflate(dense, candidate);
                            ++multiplicity;
                        }
                        if (multiplicity > 0)
                            roots.emplace_back(candidate, multiplicity);
                    }
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return roots;
}

bool factor_less(const Polynomial& a, const Polynomial& b)
{
    if (a.total_degree() != b.total_degree())
        return a.total_degree() < b.total_degree();
    if (a.size() != b.size())
        return a.size() < b.size();
    MonomialOrder order;
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end(); ++ia, ++ib)
    {
        if (!(ia->first == ib->first))
            return order(ia->first, ib->first);
        if (ia->second != ib->second)
            return ia->second < ib->second;
    }
    return false;
}

Polynomial expand(const Factorization& f)
{
    Polynomial out(f.content);
    for (const auto& [factor, m]: f.factors)
        out *= factor.pow(m);
    return out;
}

Factorization factor_polynomial(const Polynomial& p)
{
    Factorization result;
    if (p.is_zero())
    {
        result.content = 0;
        return result;
    }
    if (p.is_constant())
    {
        if (p.is_rational())
            result.content = p.constant_value();
        else
            result.factors.emplace_back(p, 1);
        return result;
    }
    if (p.has_radicals())
    {
        result.factors.emplace_back(p, 1);
        return result;
    }

    Polynomial rest = normalize(p);
    std::vector<std::pair<Polynomial, unsigned>> raw;
    for (const auto& name: rest.symbols())
    {
        unsigned lowest = rest.degree_in(name);
        for (const auto& [m, _]: rest.terms())
            lowest = std::min(lowest, m.degree_in(name));
        if (lowest == 0)
            continue;
        Monomial shift;
        shift.powers.emplace_back(name, lowest);
        rest = divide_or_throw(rest, Polynomial::monomial(shift, Rational(1)));
        raw.emplace_back(Polynomial::symbol(name), lowest);
    }
    factor_into(rest, 1, raw);

    for (auto& [factor, m]: raw)
    {
        factor = normalize(factor);
        auto it = std::find_if(result.factors.begin(), result.factors.end(),
                               [&](const auto& existing) { return existing.first == factor; });
        if (it == result.factors.end())
            result.factors.emplace_back(factor, m);
        else
            it->second += m;
    }
    std::sort(result.factors.begin(), result.factors.end(), [](const auto& a, const auto& b) {
        // bare symbols first, then by degree
        bool sa = a.first.size() == 1;
        bool sb = b.first.size() == 1;
        if (sa != sb)
            return sa;
        return factor_less(a.first, b.first);
    });

    Polynomial product = expand(result);
    result.content = p.leading_coefficient() / product.leading_coefficient();
    if (product * result.content != p)
    {
        // Should not happen; fall back to the trivial factorization rather than lie.
        result.factors = {{normalize(p), 1}};
        result.content = rational_content(p);
    }
    return result;
}

} // namespace deli
