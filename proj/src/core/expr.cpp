// SPDX-License-Identifier: Apache-2.0
#include <deli/expr.hpp>

#include <algorithm>
#include <set>

namespace deli
{

struct Node
{
    NodeKind kind = NodeKind::Number;
    Rational value = 0;
    std::string name;
    std::vector<Expr> args;
    RelOp op = RelOp::Eq;
    bool has_lower = false;
    bool has_upper = false;
    bool lower_strict = false;
    bool upper_strict = false;
};

namespace
{

Expr make(Node node)
{
    return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr make(NodeKind kind, std::vector<Expr> args)
{
    Node n;
    n.kind = kind;
    n.args = std::move(args);
    return make(std::move(n));
}

const Node& zero_node()
{
    static const Node zero {};
    return zero;
}

void collect_symbols(const Expr& e, std::set<std::string>& out)
{
    if (e.kind() == NodeKind::Symbol || e.kind() == NodeKind::Interval)
        out.insert(e.name());
    for (const auto& a: e.args())
        collect_symbols(a, out);
}

bool is_bindable(const Expr& item)
{
    if (item.kind() == NodeKind::Interval)
        return true;
    return item.kind() == NodeKind::Relation && item.op() == RelOp::Eq && item.arg(0).is_symbol();
}

} // namespace

RelOp flip(RelOp op) noexcept
{
    switch (op)
    {
        case RelOp::Lt: return RelOp::Gt;
        case RelOp::Le: return RelOp::Ge;
        case RelOp::Gt: return RelOp::Lt;
        case RelOp::Ge: return RelOp::Le;
        case RelOp::Eq: break;
    }
    return RelOp::Eq;
}

bool is_strict(RelOp op) noexcept
{
    return op == RelOp::Lt || op == RelOp::Gt;
}

Expr::Expr(): node_(std::shared_ptr<const Node>(std::shared_ptr<const Node> {}, &zero_node())) {}

NodeKind Expr::kind() const { return node_->kind; }

ExprCategory Expr::category() const
{
    switch (kind())
    {
        case NodeKind::Relation: return op() == RelOp::Eq ? ExprCategory::Equation : ExprCategory::Inequation;
        case NodeKind::Interval: return ExprCategory::Inequation;
        case NodeKind::Set: return ExprCategory::SolutionSet;
        default: return ExprCategory::Expression;
    }
}

const Rational& Expr::number() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::args() const { return node_->args; }
RelOp Expr::op() const { return node_->op; }

const Expr* Expr::lower() const
{
    return node_->has_lower ? &node_->args[0] : nullptr;
}

const Expr* Expr::upper() const
{
    return node_->has_upper ? &node_->args[node_->has_lower ? 1 : 0] : nullptr;
}

bool Expr::lower_strict() const { return node_->lower_strict; }
bool Expr::upper_strict() const { return node_->upper_strict; }

std::vector<std::string> Expr::free_symbols() const
{
    std::set<std::string> names;
    collect_symbols(*this, names);
    return {names.begin(), names.end()};
}

bool Expr::operator==(const Expr& other) const
{
    if (node_ == other.node_)
        return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    return a.kind == b.kind && a.value == b.value && a.name == b.name && a.op == b.op &&
           a.has_lower == b.has_lower && a.has_upper == b.has_upper && a.lower_strict == b.lower_strict &&
           a.upper_strict == b.upper_strict && a.args == b.args;
}

Expr number(const Rational& value)
{
    Node n;
    n.value = value;
    return make(std::move(n));
}

Expr symbol(std::string name)
{
    Node n;
    n.kind = NodeKind::Symbol;
    n.name = std::move(name);
    return make(std::move(n));
}

Expr add(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    for (auto& t: terms)
    {
        if (t.kind() == NodeKind::Sum)
            flat.insert(flat.end(), t.args().begin(), t.args().end());
        else
            flat.push_back(std::move(t));
    }
    if (flat.empty())
        return number(0);
    if (flat.size() == 1)
        return flat.front();
    return make(NodeKind::Sum, std::move(flat));
}

Expr subtract(const Expr& a, const Expr& b)
{
    return add({a, negate(b)});
}

Expr multiply(std::vector<Expr> factors)
{
    std::vector<Expr> flat;
    for (auto& f: factors)
    {
        if (f.kind() == NodeKind::Product)
            flat.insert(flat.end(), f.args().begin(), f.args().end());
        else
            flat.push_back(std::move(f));
    }
    if (flat.empty())
        return number(1);
    if (flat.size() == 1)
        return flat.front();
    if (flat.front().kind() == NodeKind::Negate)
    {
        flat.front() = flat.front().arg(0);
        return negate(multiply(std::move(flat)));
    }
    return make(NodeKind::Product, std::move(flat));
}

Expr divide(const Expr& numerator, const Expr& denominator)
{
    if (numerator.is_number() && denominator.is_number() && denominator.number() != 0)
        return number(numerator.number() / denominator.number());
    return make(NodeKind::Quotient, {numerator, denominator});
}

Expr power(const Expr& base, const Expr& exponent)
{
    return make(NodeKind::Power, {base, exponent});
}

Expr negate(const Expr& e)
{
    switch (e.kind())
    {
        case NodeKind::Number: return number(-e.number());
        case NodeKind::Negate: return e.arg(0);
        case NodeKind::Product:
            if (e.arg(0).is_number())
            {
                std::vector<Expr> factors(e.args().begin(), e.args().end());
                factors.front() = number(-factors.front().number());
                return make(NodeKind::Product, std::move(factors));
            }
            break;
        default: break;
    }
    return make(NodeKind::Negate, {e});
}

Expr square_root(const Expr& e)
{
    return make(NodeKind::Sqrt, {e});
}

Expr relation(RelOp op, const Expr& lhs, const Expr& rhs)
{
    for (const auto* side: {&lhs, &rhs})
        if (side->category() != ExprCategory::Expression)
            throw MathError(Errc::InvalidArgument, "a relation can only compare two expressions");
    Node n;
    n.kind = NodeKind::Relation;
    n.op = op;
    n.args = {lhs, rhs};
    return make(std::move(n));
}

Expr interval(std::string symbol_name, std::optional<Expr> lower, bool lower_strict, std::optional<Expr> upper,
              bool upper_strict)
{
    Node n;
    n.kind = NodeKind::Interval;
    n.name = std::move(symbol_name);
    if (lower)
    {
        n.has_lower = true;
        n.lower_strict = lower_strict;
        n.args.push_back(std::move(*lower));
    }
    if (upper)
    {
        n.has_upper = true;
        n.upper_strict = upper_strict;
        n.args.push_back(std::move(*upper));
    }
    return make(std::move(n));
}

Expr solution_set(std::vector<Expr> items)
{
    for (const auto& item: items)
        if (!is_bindable(item))
            throw MathError(Errc::InvalidArgument,
                            "solution-set items must be bindings (symbol = expression) or interval constraints");
    return make(NodeKind::Set, std::move(items));
}

Expr substitute(const Expr& e, const std::vector<std::pair<std::string, Expr>>& bindings)
{
    auto rebuild = [&](auto&& self, const Expr& x) -> Expr {
        std::vector<Expr> args;
        for (const auto& a: x.args())
            args.push_back(self(self, a));
        switch (x.kind())
        {
            case NodeKind::Number: return x;
            case NodeKind::Symbol:
                for (const auto& [name, value]: bindings)
                    if (name == x.name())
                        return value;
                return x;
            case NodeKind::Sum: return add(std::move(args));
            case NodeKind::Product: return multiply(std::move(args));
            case NodeKind::Quotient: return divide(args[0], args[1]);
            case NodeKind::Power: return power(args[0], args[1]);
            case NodeKind::Negate: return negate(args[0]);
            case NodeKind::Sqrt: return square_root(args[0]);
            case NodeKind::Relation: return relation(x.op(), args[0], args[1]);
            case NodeKind::Interval:
            {
                std::optional<Expr> lo;
                std::optional<Expr> hi;
                std::size_t i = 0;
                if (x.lower())
                    lo = args[i++];
                if (x.upper())
                    hi = args[i];
                return interval(x.name(), lo, x.lower_strict(), hi, x.upper_strict());
            }
            case NodeKind::Set: return solution_set(std::move(args));
        }
        return x;
    };
    return rebuild(rebuild, e);
}

} // namespace deli
