// SPDX-License-Identifier: Apache-2.0
#include <deli/expr.hpp>

#include <cctype>

namespace deli
{
namespace
{

std::string print_number(const Rational& v)
{
    std::string sign = v < 0 ? "-" : "";
    BigInt p = abs(num_of(v));
    BigInt q = den_of(v);
    if (q == 1)
        return sign + p.str();
    return sign + "\\frac{" + p.str() + "}{" + q.str() + "}";
}

bool looks_negative(const Expr& e)
{
    switch (e.kind())
    {
        case NodeKind::Number: return e.number() < 0;
        case NodeKind::Negate: return true;
        case NodeKind::Product: return e.arg(0).is_number() && e.arg(0).number() < 0;
        default: return false;
    }
}

const char* relop_text(RelOp op)
{
    switch (op)
    {
        case RelOp::Eq: return "=";
        case RelOp::Lt: return "<";
        case RelOp::Le: return "\\le ";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return "\\ge ";
    }
    return "=";
}

std::string paren(const std::string& s)
{
    return "(" + s + ")";
}

std::string print_sum(const Expr& e)
{
    std::string out;
    bool first = true;
    for (const auto& term: e.args())
    {
        if (first)
            out += print(term);
        else if (looks_negative(term))
        {
            Expr positive = negate(term);
            std::string body = print(positive);
            out += " - " + (positive.kind() == NodeKind::Sum ? paren(body) : body);
        }
        else
            out += " + " + print(term);
        first = false;
    }
    return out;
}

std::string print_product(const Expr& e)
{
    std::string out;
    for (std::size_t i = 0; i < e.args().size(); ++i)
    {
        const Expr& f = e.arg(i);
        std::string s = print(f);
        bool wrap = f.kind() == NodeKind::Sum || (i > 0 && looks_negative(f));
        if (wrap)
            s = paren(s);
        if (i > 0 && std::isdigit(static_cast<unsigned char>(s.front())))
            out += " \\cdot ";
        out += s;
    }
    return out;
}

std::string print_power(const Expr& e)
{
    const Expr& base = e.arg(0);
    std::string b = print(base);
    bool bare = base.is_symbol() || base.kind() == NodeKind::Sqrt ||
                (base.is_number() && base.number() >= 0 && is_integer(base.number()));
    if (!bare)
        b = paren(b);
    std::string x = print(e.arg(1));
    if (x.size() == 1)
        return b + "^" + x;
    return b + "^{" + x + "}";
}

std::string print_interval(const Expr& e)
{
    const Expr* lo = e.lower();
    const Expr* hi = e.upper();
    const std::string& x = e.name();
    if (lo && hi)
        return print(*lo) + relop_text(e.lower_strict() ? RelOp::Lt : RelOp::Le) + x +
               relop_text(e.upper_strict() ? RelOp::Lt : RelOp::Le) + print(*hi);
    if (lo)
        return x + relop_text(e.lower_strict() ? RelOp::Gt : RelOp::Ge) + print(*lo);
    if (hi)
        return x + relop_text(e.upper_strict() ? RelOp::Lt : RelOp::Le) + print(*hi);
    return "-\\infty<" + x + "<\\infty";
}

} // namespace

std::string print(const Expr& e)
{
    switch (e.kind())
    {
        case NodeKind::Number: return print_number(e.number());
        case NodeKind::Symbol: return e.name();
        case NodeKind::Sum: return print_sum(e);
        case NodeKind::Product: return print_product(e);
        case NodeKind::Quotient: return "\\frac{" + print(e.arg(0)) + "}{" + print(e.arg(1)) + "}";
        case NodeKind::Power: return print_power(e);
        case NodeKind::Negate:
        {
            const Expr& inner = e.arg(0);
            std::string s = print(inner);
            return "-" + (inner.kind() == NodeKind::Sum ? paren(s) : s);
        }
        case NodeKind::Sqrt: return "\\sqrt{" + print(e.arg(0)) + "}";
        case NodeKind::Relation: return print(e.arg(0)) + relop_text(e.op()) + print(e.arg(1));
        case NodeKind::Interval: return print_interval(e);
        case NodeKind::Set:
        {
            std::string out = "[";
            for (std::size_t i = 0; i < e.args().size(); ++i)
                out += (i ? ", " : "") + print(e.arg(i));
            return out + "]";
        }
    }
    return {};
}

} // namespace deli
