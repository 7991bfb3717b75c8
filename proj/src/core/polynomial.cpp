// SPDX-License-Identifier: Apache-2.0
#include <deli/polynomial.hpp>

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace deli
{

unsigned Monomial::degree() const
{
    unsigned total = 0;
    for (const auto& [_, e]: powers)
        total += e;
    return total;
}

unsigned Monomial::degree_in(const std::string& symbol) const
{
    for (const auto& [name, e]: powers)
        if (name == symbol)
            return e;
    return 0;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const
{
    unsigned da = a.degree();
    unsigned db = b.degree();
    if (da != db)
        return da > db;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.powers.size() && j < b.powers.size())
    {
        const auto& [na, ea] = a.powers[i];
        const auto& [nb, eb] = b.powers[j];
        if (na == nb)
        {
            if (ea != eb)
                return ea > eb;
            ++i;
            ++j;
        }
        else
            return na < nb;
    }
    if (i < a.powers.size())
        return true;
    if (j < b.powers.size())
        return false;
    return a.radical < b.radical;
}

Monomial multiply(const Monomial& a, const Monomial& b, Rational& scale)
{
    Monomial out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.powers.size() || j < b.powers.size())
    {
        if (j == b.powers.size() || (i < a.powers.size() && a.powers[i].first < b.powers[j].first))
            out.powers.push_back(a.powers[i++]);
        else if (i == a.powers.size() || b.powers[j].first < a.powers[i].first)
            out.powers.push_back(b.powers[j++]);
        else
        {
            out.powers.emplace_back(a.powers[i].first, a.powers[i].second + b.powers[j].second);
            ++i;
            ++j;
        }
    }
    if (a.radical == 1 || b.radical == 1)
        out.radical = a.radical * b.radical;
    else
    {
        // sqrt(r1) * sqrt(r2) = g * sqrt(r1 r2 / g^2) for squarefree r1, r2 with g = gcd
        BigInt g = gcd(a.radical, b.radical);
        out.radical = (a.radical / g) * (b.radical / g);
        scale *= Rational(g);
    }
    return out;
}

Polynomial::Polynomial(const Rational& constant)
{
    if (constant != 0)
        terms_.emplace(Monomial {}, constant);
}

Polynomial Polynomial::symbol(const std::string& name)
{
    Monomial m;
    m.powers.emplace_back(name, 1);
    return monomial(std::move(m), Rational(1));
}

Polynomial Polynomial::sqrt_of(const BigInt& n)
{
    assert(n > 0);
    auto [square, free] = split_square(n);
    Monomial m;
    m.radical = free;
    return monomial(std::move(m), Rational(square));
}

Polynomial Polynomial::monomial(Monomial m, const Rational& coefficient)
{
    Polynomial p;
    if (coefficient != 0)
        p.terms_.emplace(std::move(m), coefficient);
    return p;
}

bool Polynomial::is_constant() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.powers.empty(); });
}

bool Polynomial::is_rational() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const
{
    assert(is_rational());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

bool Polynomial::has_radicals() const
{
    return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.radical != 1; });
}

std::vector<std::string> Polynomial::symbols() const
{
    std::set<std::string> names;
    for (const auto& [m, _]: terms_)
        for (const auto& [name, __]: m.powers)
            names.insert(name);
    return {names.begin(), names.end()};
}

bool Polynomial::contains(const std::string& symbol) const
{
    return degree_in(symbol) > 0;
}

unsigned Polynomial::total_degree() const
{
    unsigned best = 0;
    for (const auto& [m, _]: terms_)
        best = std::max(best, m.degree());
    return best;
}

unsigned Polynomial::degree_in(const std::string& symbol) const
{
    unsigned best = 0;
    for (const auto& [m, _]: terms_)
        best = std::max(best, m.degree_in(symbol));
    return best;
}

const Monomial& Polynomial::leading_monomial() const
{
    assert(!terms_.empty());
    return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const
{
    assert(!terms_.empty());
    return terms_.begin()->second;
}

std::map<unsigned, Polynomial> Polynomial::coefficients_in(const std::string& symbol) const
{
    std::map<unsigned, Polynomial> out;
    for (const auto& [m, c]: terms_)
    {
        Monomial rest = m;
        unsigned e = 0;
        auto it = std::find_if(rest.powers.begin(), rest.powers.end(),
                               [&](const auto& p) { return p.first == symbol; });
        if (it != rest.powers.end())
        {
            e = it->second;
            rest.powers.erase(it);
        }
        out[e].add_term(rest, c);
    }
    return out;
}

Polynomial Polynomial::from_coefficients(const std::map<unsigned, Polynomial>& coefficients,
                                         const std::string& symbol)
{
    Polynomial out;
    for (const auto& [e, c]: coefficients)
    {
        if (e == 0)
        {
            out += c;
            continue;
        }
        Monomial m;
        m.powers.emplace_back(symbol, e);
        out += c * monomial(m, Rational(1));
    }
    return out;
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted)
    {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    for (const auto& [m, c]: other.terms_)
        add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
    for (const auto& [m, c]: other.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    Polynomial out;
    for (const auto& [ma, ca]: a.terms_)
        for (const auto& [mb, cb]: b.terms_)
        {
            Rational scale = ca * cb;
            Monomial m = multiply(ma, mb, scale);
            out.add_term(m, scale);
        }
    return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other)
{
    *this = *this * other;
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scale)
{
    if (scale == 0)
    {
        terms_.clear();
        return *this;
    }
    for (auto& [_, c]: terms_)
        c *= scale;
    return *this;
}

Polynomial Polynomial::pow(unsigned exponent) const
{
    Polynomial result(Rational(1));
    Polynomial base = *this;
    while (exponent > 0)
    {
        if (exponent & 1U)
            result *= base;
        exponent >>= 1U;
        if (exponent > 0)
            base *= base;
    }
    return result;
}

Polynomial Polynomial::derivative(const std::string& symbol) const
{
    Polynomial out;
    for (const auto& [m, c]: terms_)
    {
        unsigned e = m.degree_in(symbol);
        if (e == 0)
            continue;
        Monomial d = m;
        for (auto it = d.powers.begin(); it != d.powers.end(); ++it)
            if (it->first == symbol)
            {
                if (--it->second == 0)
                    d.powers.erase(it);
                break;
            }
        out.add_term(d, c * e);
    }
    return out;
}

Polynomial Polynomial::substitute(const std::string& symbol, const Polynomial& value) const
{
    std::map<unsigned, Polynomial> power_cache;
    Polynomial out;
    for (const auto& [e, coefficient]: coefficients_in(symbol))
    {
        if (e == 0)
        {
            out += coefficient;
            continue;
        }
        auto it = power_cache.find(e);
        if (it == power_cache.end())
            it = power_cache.emplace(e, value.pow(e)).first;
        out += coefficient * it->second;
    }
    return out;
}

Polynomial Polynomial::evaluate(const std::map<std::string, Rational>& point) const
{
    Polynomial out;
    for (const auto& [m, c]: terms_)
    {
        Rational scale = c;
        Monomial rest;
        rest.radical = m.radical;
        for (const auto& [name, e]: m.powers)
        {
            auto it = point.find(name);
            if (it == point.end())
                rest.powers.emplace_back(name, e);
            else
                scale *= deli::pow(it->second, e);
        }
        out.add_term(rest, scale);
    }
    return out;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero())
        return std::nullopt;
    if (b.is_rational())
        return a * (Rational(1) / b.constant_value());
    if (b.has_radicals())
        return std::nullopt;
    Polynomial remainder = a;
    Polynomial quotient;
    const Monomial& lead_b = b.leading_monomial();
    const Rational& lc_b = b.leading_coefficient();
    while (!remainder.is_zero())
    {
        const Monomial& lead_r = remainder.leading_monomial();
        Monomial q;
        q.radical = lead_r.radical;
        std::size_t j = 0;
        for (const auto& [name, e]: lead_r.powers)
        {
            unsigned need = 0;
            if (j < lead_b.powers.size() && lead_b.powers[j].first == name)
                need = lead_b.powers[j++].second;
            if (need > e)
                return std::nullopt;
            if (e > need)
                q.powers.emplace_back(name, e - need);
        }
        if (j != lead_b.powers.size())
            return std::nullopt;
        Polynomial step = monomial(q, remainder.leading_coefficient() / lc_b);
        quotient += step;
        remainder -= step * b;
    }
    return quotient;
}

Polynomial Polynomial::conjugate(const BigInt& prime) const
{
    Polynomial out;
    for (const auto& [m, c]: terms_)
        out.add_term(m, m.radical % prime == 0 ? Rational(-c) : c);
    return out;
}

std::string Polynomial::debug_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c]: terms_)
    {
        if (!first)
            os << " + ";
        first = false;
        os << to_string(c);
        if (m.radical != 1)
            os << "*sqrt(" << m.radical.str() << ")";
        for (const auto& [name, e]: m.powers)
        {
            os << "*" << name;
            if (e != 1)
                os << "^" << e;
        }
    }
    return os.str();
}

} // namespace deli
