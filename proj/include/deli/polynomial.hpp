// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/numeric.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace deli
{

/// A power product of symbols times an optional square root of a squarefree
/// positive integer. The radical lets quadratic roots such as 1 + sqrt(2)
/// live in the same exact representation as ordinary polynomials.
struct Monomial
{
    std::vector<std::pair<std::string, unsigned>> powers; // sorted by symbol, exponents > 0
    BigInt radical = 1;

    [[nodiscard]] unsigned degree() const;
    [[nodiscard]] unsigned degree_in(const std::string& symbol) const;
    [[nodiscard]] bool is_one() const { return powers.empty() && radical == 1; }

    bool operator==(const Monomial& other) const = default;
};

/// Graded-lexicographic order, leading monomial first. Symbols compare
/// alphabetically (x > y > z in the usual lex sense); ties on the symbol part
/// put smaller radicals first.
struct MonomialOrder
{
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial
{
public:
    using Terms = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() = default;
    explicit Polynomial(const Rational& constant);
    static Polynomial symbol(const std::string& name);
    /// sqrt(n) for a positive integer n, reduced to s*sqrt(d) with d squarefree.
    static Polynomial sqrt_of(const BigInt& n);
    static Polynomial monomial(Monomial m, const Rational& coefficient);

    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const;
    /// Constant with no radical part.
    [[nodiscard]] bool is_rational() const;
    [[nodiscard]] Rational constant_value() const; // requires is_rational()
    [[nodiscard]] bool has_radicals() const;
    [[nodiscard]] std::vector<std::string> symbols() const;
    [[nodiscard]] bool contains(const std::string& symbol) const;
    [[nodiscard]] unsigned total_degree() const;
    [[nodiscard]] unsigned degree_in(const std::string& symbol) const;
    [[nodiscard]] const Monomial& leading_monomial() const;
    [[nodiscard]] const Rational& leading_coefficient() const;
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    /// Coefficients of successive powers of `symbol`, each free of `symbol`.
    [[nodiscard]] std::map<unsigned, Polynomial> coefficients_in(const std::string& symbol) const;
    static Polynomial from_coefficients(const std::map<unsigned, Polynomial>& coefficients,
                                        const std::string& symbol);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);
    Polynomial& operator*=(const Rational& scale);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    bool operator==(const Polynomial& other) const { return terms_ == other.terms_; }

    [[nodiscard]] Polynomial pow(unsigned exponent) const;
    [[nodiscard]] Polynomial derivative(const std::string& symbol) const;
    /// Replaces `symbol` by `value` everywhere.
    [[nodiscard]] Polynomial substitute(const std::string& symbol, const Polynomial& value) const;
    [[nodiscard]] Polynomial evaluate(const std::map<std::string, Rational>& point) const;

    /// Exact quotient a / b, or nullopt if b does not divide a.
    static std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

    /// Flips the sign of every term whose radical is divisible by `prime`.
    [[nodiscard]] Polynomial conjugate(const BigInt& prime) const;

    /// Readable dump for diagnostics and test messages, e.g. "x^2 + 2*x + 1".
    [[nodiscard]] std::string debug_string() const;

private:
    void add_term(const Monomial& m, const Rational& c);

    Terms terms_;
};

Monomial multiply(const Monomial& a, const Monomial& b, Rational& scale);

} // namespace deli
