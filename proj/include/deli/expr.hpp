// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/errors.hpp>
#include <deli/numeric.hpp>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deli
{

enum class NodeKind
{
    Number,
    Symbol,
    Sum,
    Product,
    Quotient,
    Power,
    Negate,
    Sqrt,
    Relation,
    Interval, // symbol with optional lower/upper bounds, e.g. 1<x\le 3
    Set,      // solution set: bindings and interval constraints, read as alternatives
};

enum class RelOp
{
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
};

enum class ExprCategory
{
    Expression,
    Equation,
    Inequation,
    SolutionSet,
};

RelOp flip(RelOp op) noexcept;
bool is_strict(RelOp op) noexcept;

struct Node;

/// Immutable expression handle. Copies share the underlying tree.
///
/// Every Expr is built through the factory functions below, which keep a
/// small set of normal-form rules (flattened sums and products, negative
/// numbers folded into constants, rational quotients folded into rationals).
/// Those rules are what make print/parse round trips structurally exact.
class Expr
{
public:
    Expr(); // the number 0

    [[nodiscard]] NodeKind kind() const;
    [[nodiscard]] ExprCategory category() const;

    [[nodiscard]] const Rational& number() const;   // Number
    [[nodiscard]] const std::string& name() const;  // Symbol, Interval
    [[nodiscard]] std::span<const Expr> args() const;
    [[nodiscard]] const Expr& arg(std::size_t i) const { return args()[i]; }
    [[nodiscard]] RelOp op() const;                 // Relation

    // Interval bounds; bounds are stored in args() when present.
    [[nodiscard]] const Expr* lower() const;
    [[nodiscard]] const Expr* upper() const;
    [[nodiscard]] bool lower_strict() const;
    [[nodiscard]] bool upper_strict() const;

    [[nodiscard]] bool is_number() const { return kind() == NodeKind::Number; }
    [[nodiscard]] bool is_symbol() const { return kind() == NodeKind::Symbol; }
    [[nodiscard]] bool is_relation() const { return kind() == NodeKind::Relation; }

    /// Sorted, de-duplicated free symbols.
    [[nodiscard]] std::vector<std::string> free_symbols() const;

    /// Structural identity.
    bool operator==(const Expr& other) const;
    bool operator!=(const Expr& other) const { return !(*this == other); }

    explicit Expr(std::shared_ptr<const Node> node): node_(std::move(node)) {}

private:
    std::shared_ptr<const Node> node_;
};

// Factories.
Expr number(const Rational& value);
Expr symbol(std::string name);
Expr add(std::vector<Expr> terms);
Expr subtract(const Expr& a, const Expr& b);
Expr multiply(std::vector<Expr> factors);
Expr divide(const Expr& numerator, const Expr& denominator);
Expr power(const Expr& base, const Expr& exponent);
Expr negate(const Expr& e);
Expr square_root(const Expr& e);
Expr relation(RelOp op, const Expr& lhs, const Expr& rhs);
Expr interval(std::string symbol, std::optional<Expr> lower, bool lower_strict, std::optional<Expr> upper,
              bool upper_strict);
Expr solution_set(std::vector<Expr> items);

/// Parses the LaTeX-subset notation. A leading '[' parses a solution set.
/// Throws SyntaxError or MathError(UnsupportedConstruct).
Expr parse(std::string_view text);

/// Emits surface notation; parse(print(e)) == e.
std::string print(const Expr& e);

/// Replaces symbols simultaneously.
Expr substitute(const Expr& e, const std::vector<std::pair<std::string, Expr>>& bindings);

} // namespace deli
