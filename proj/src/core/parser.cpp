// SPDX-License-Identifier: Apache-2.0
#include <deli/expr.hpp>

#include <cctype>
#include <optional>

namespace deli
{
namespace
{

enum class Tok
{
    End,
    Number,
    Letter,   // symbol, text holds the full name incl. subscript
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Frac,
    Sqrt,
    Infinity,
};

struct Token
{
    Tok kind = Tok::End;
    std::string text;
    std::size_t offset = 0;
};

bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

class Lexer
{
public:
    explicit Lexer(std::string_view text): s_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true)
        {
            skip_space();
            if (pos_ >= s_.size())
            {
                out.push_back({Tok::End, "", pos_});
                return out;
            }
            if (auto t = next())
                out.push_back(std::move(*t));
        }
    }

private:
    void skip_space()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool starts_with(std::string_view prefix) const { return s_.substr(pos_).starts_with(prefix); }

    std::optional<Token> next()
    {
        std::size_t start = pos_;
        char c = s_[pos_];
        auto single = [&](Tok k, std::size_t len = 1) {
            pos_ += len;
            return Token {k, std::string(s_.substr(start, len)), start};
        };

        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < s_.size() &&
                                                           std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))))
        {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (pos_ + 1 < s_.size() && s_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))
            {
                ++pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
            }
            return Token {Tok::Number, std::string(s_.substr(start, pos_ - start)), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)))
        {
            ++pos_;
            std::string name(1, c);
            if (pos_ < s_.size() && s_[pos_] == '_')
                name += subscript();
            return Token {Tok::Letter, name, start};
        }
        if (c == '\\')
            return command();

        // multi-byte operators
        if (starts_with("\xE2\x89\xA4"))
            return single(Tok::Le, 3);
        if (starts_with("\xE2\x89\xA5"))
            return single(Tok::Ge, 3);
        if (starts_with("\xE2\x88\x92"))
            return single(Tok::Minus, 3);
        if (starts_with("\xC2\xB7") || starts_with("\xC3\x97"))
            return single(Tok::Star, 2);
        if (starts_with("\xC3\xB7"))
            return single(Tok::Slash, 2);
        if (starts_with("\xE2\x88\x9E"))
            return single(Tok::Infinity, 3);
        if (starts_with("<="))
            return single(Tok::Le, 2);
        if (starts_with(">="))
            return single(Tok::Ge, 2);

        switch (c)
        {
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '^': return single(Tok::Caret);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case '[': return single(Tok::LBracket);
            case ']': return single(Tok::RBracket);
            case ',': return single(Tok::Comma);
            case '=': return single(Tok::Eq);
            case '<': return single(Tok::Lt);
            case '>': return single(Tok::Gt);
            case '|':
            case '!':
            case '%':
                throw MathError(Errc::UnsupportedConstruct,
                                std::string("'") + c + "' at offset " + std::to_string(start) +
                                    " is outside the supported notation");
            default: break;
        }
        throw SyntaxError("unexpected character '" + std::string(1, c) + "'", start);
    }

    std::string subscript()
    {
        std::size_t at = pos_++;
        if (pos_ < s_.size() && s_[pos_] == '{')
        {
            std::size_t close = s_.find('}', pos_);
            if (close == std::string_view::npos)
                throw SyntaxError("unterminated subscript", at);
            std::string body;
            for (char ch: s_.substr(pos_ + 1, close - pos_ - 1))
                if (!std::isspace(static_cast<unsigned char>(ch)))
                {
                    if (!is_ident_char(ch))
                        throw SyntaxError("subscripts may only contain letters and digits", at);
                    body += ch;
                }
            if (body.empty())
                throw SyntaxError("empty subscript", at);
            pos_ = close + 1;
            return body.size() == 1 ? "_" + body : "_{" + body + "}";
        }
        if (pos_ < s_.size() && is_ident_char(s_[pos_]))
            return std::string("_") + s_[pos_++];
        throw SyntaxError("expected a subscript after '_'", at);
    }

    std::optional<Token> command()
    {
        std::size_t start = pos_++;
        if (pos_ >= s_.size())
            throw SyntaxError("dangling backslash", start);
        char c = s_[pos_];
        if (!std::isalpha(static_cast<unsigned char>(c)))
        {
            ++pos_;
            switch (c)
            {
                case ',':
                case ';':
                case ':':
                case '!':
                case ' ': return std::nullopt;
                case '{': return Token {Tok::LBracket, "\\{", start};
                case '}': return Token {Tok::RBracket, "\\}", start};
                default: throw SyntaxError(std::string("unknown escape '\\") + c + "'", start);
            }
        }
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        std::string name(s_.substr(start + 1, pos_ - start - 1));
        auto tok = [&](Tok k) { return Token {k, "\\" + name, start}; };

        if (name == "frac" || name == "dfrac" || name == "tfrac")
            return tok(Tok::Frac);
        if (name == "sqrt")
            return tok(Tok::Sqrt);
        if (name == "cdot" || name == "times")
            return tok(Tok::Star);
        if (name == "div")
            return tok(Tok::Slash);
        if (name == "le" || name == "leq" || name == "leqslant")
            return tok(Tok::Le);
        if (name == "ge" || name == "geq" || name == "geqslant")
            return tok(Tok::Ge);
        if (name == "lt")
            return tok(Tok::Lt);
        if (name == "gt")
            return tok(Tok::Gt);
        if (name == "infty")
            return tok(Tok::Infinity);
        if (name == "quad" || name == "qquad")
            return std::nullopt;
        if (name == "left" || name == "right")
        {
            skip_space();
            if (pos_ < s_.size() && s_[pos_] == '.')
                ++pos_;
            return std::nullopt;
        }
        throw MathError(Errc::UnsupportedConstruct, "'\\" + name + "' at offset " + std::to_string(start) +
                                                        " is outside the supported notation");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

bool is_relop(Tok k)
{
    return k == Tok::Eq || k == Tok::Lt || k == Tok::Le || k == Tok::Gt || k == Tok::Ge;
}

RelOp to_relop(Tok k)
{
    switch (k)
    {
        case Tok::Lt: return RelOp::Lt;
        case Tok::Le: return RelOp::Le;
        case Tok::Gt: return RelOp::Gt;
        case Tok::Ge: return RelOp::Ge;
        default: return RelOp::Eq;
    }
}

// A chain operand: an expression or one of the two infinities.
struct Operand
{
    std::optional<Expr> expr;
    int infinity = 0; // -1, +1
    std::size_t offset = 0;
};

class Parser
{
public:
    explicit Parser(std::vector<Token> tokens): t_(std::move(tokens)) {}

    Expr top()
    {
        Expr result = peek().kind == Tok::LBracket ? set() : chain(false);
        if (peek().kind != Tok::End)
            fail("unexpected '" + peek().text + "'");
        return result;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return t_[std::min(i_ + ahead, t_.size() - 1)]; }
    const Token& take() { return t_[std::min(i_++, t_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& msg) const
    {
        if (peek().kind == Tok::End)
            throw SyntaxError(msg.empty() ? "unexpected end of input" : msg + " (unexpected end of input)",
                              peek().offset);
        throw SyntaxError(msg, peek().offset);
    }

    void expect(Tok k, const char* what)
    {
        if (peek().kind != k)
            fail(std::string("expected ") + what);
        ++i_;
    }

    Expr set()
    {
        ++i_;
        std::vector<Expr> items;
        if (peek().kind == Tok::RBracket)
        {
            ++i_;
            return solution_set({});
        }
        while (true)
        {
            items.push_back(chain(true));
            if (peek().kind == Tok::Comma)
            {
                ++i_;
                continue;
            }
            expect(Tok::RBracket, "',' or ']'");
            break;
        }
        return solution_set(std::move(items));
    }

    Operand operand()
    {
        Operand o;
        o.offset = peek().offset;
        if (peek().kind == Tok::Infinity)
        {
            ++i_;
            o.infinity = 1;
            return o;
        }
        if (peek().kind == Tok::Minus && peek(1).kind == Tok::Infinity)
        {
            i_ += 2;
            o.infinity = -1;
            return o;
        }
        if (peek().kind == Tok::Plus && peek(1).kind == Tok::Infinity)
        {
            i_ += 2;
            o.infinity = 1;
            return o;
        }
        o.expr = sum();
        return o;
    }

    static void no_infinity(const Operand& o)
    {
        if (o.infinity != 0)
            throw SyntaxError("infinity may only bound a chained inequality", o.offset);
    }

    Expr chain(bool in_set)
    {
        std::size_t start = peek().offset;
        std::vector<Operand> operands {operand()};
        std::vector<Tok> ops;
        while (is_relop(peek().kind))
        {
            ops.push_back(take().kind);
            operands.push_back(operand());
        }
        if (ops.size() > 2)
            throw SyntaxError("at most two chained relations are supported", start);

        if (ops.empty())
        {
            no_infinity(operands[0]);
            if (in_set)
                throw SyntaxError("solution-set items must be bindings or inequalities", start);
            return *operands[0].expr;
        }
        if (ops.size() == 1)
        {
            no_infinity(operands[0]);
            no_infinity(operands[1]);
            const Expr& lhs = *operands[0].expr;
            const Expr& rhs = *operands[1].expr;
            RelOp op = to_relop(ops[0]);
            if (!in_set)
                return relation(op, lhs, rhs);
            if (op == RelOp::Eq)
            {
                if (!lhs.is_symbol())
                    throw SyntaxError("a solution-set binding needs a symbol on the left", start);
                return relation(op, lhs, rhs);
            }
            if (lhs.is_symbol())
                return one_sided(lhs.name(), op, rhs);
            if (rhs.is_symbol())
                return one_sided(rhs.name(), flip(op), lhs);
            throw SyntaxError("a solution-set inequality must constrain a single symbol", start);
        }

        // a op x op b
        bool increasing = (ops[0] == Tok::Lt || ops[0] == Tok::Le) && (ops[1] == Tok::Lt || ops[1] == Tok::Le);
        bool decreasing = (ops[0] == Tok::Gt || ops[0] == Tok::Ge) && (ops[1] == Tok::Gt || ops[1] == Tok::Ge);
        if (!increasing && !decreasing)
            throw SyntaxError("a chained inequality must run in one direction", start);
        const Operand& middle = operands[1];
        if (middle.infinity != 0 || !middle.expr->is_symbol())
            throw SyntaxError("the middle of a chained inequality must be a symbol", middle.offset);
        const Operand& lo = increasing ? operands[0] : operands[2];
        const Operand& hi = increasing ? operands[2] : operands[0];
        bool lo_strict = is_strict(to_relop(increasing ? ops[0] : ops[1]));
        bool hi_strict = is_strict(to_relop(increasing ? ops[1] : ops[0]));
        if (lo.infinity == 1 || hi.infinity == -1)
            throw SyntaxError("infinite bound on the wrong side", lo.infinity == 1 ? lo.offset : hi.offset);
        std::optional<Expr> lower = lo.expr;
        std::optional<Expr> upper = hi.expr;
        return interval(middle.expr->name(), lower, lower ? lo_strict : true, upper, upper ? hi_strict : true);
    }

    static Expr one_sided(const std::string& name, RelOp op, const Expr& bound)
    {
        if (op == RelOp::Gt || op == RelOp::Ge)
            return interval(name, bound, is_strict(op), std::nullopt, false);
        return interval(name, std::nullopt, false, bound, is_strict(op));
    }

    Expr sum()
    {
        std::vector<Expr> terms {term()};
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus)
        {
            bool minus = take().kind == Tok::Minus;
            Expr t = term();
            terms.push_back(minus ? negate(t) : t);
        }
        return add(std::move(terms));
    }

    Expr term()
    {
        Expr acc = implicit_product();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash)
        {
            bool div = take().kind == Tok::Slash;
            Expr rhs = implicit_product();
            acc = div ? divide(acc, rhs) : multiply({acc, rhs});
        }
        return acc;
    }

    bool starts_juxtaposed() const
    {
        switch (peek().kind)
        {
            case Tok::Letter:
            case Tok::LParen:
            case Tok::LBrace:
            case Tok::Frac:
            case Tok::Sqrt: return true;
            default: return false;
        }
    }

    Expr implicit_product()
    {
        std::vector<Expr> factors {unary()};
        while (starts_juxtaposed())
            factors.push_back(power_expr());
        return multiply(std::move(factors));
    }

    Expr unary()
    {
        if (peek().kind == Tok::Minus)
        {
            ++i_;
            return negate(unary());
        }
        if (peek().kind == Tok::Plus)
        {
            ++i_;
            return unary();
        }
        return power_expr();
    }

    Expr power_expr()
    {
        Expr base = primary();
        if (peek().kind == Tok::Caret)
        {
            ++i_;
            return power(base, exponent());
        }
        return base;
    }

    Expr exponent()
    {
        if (peek().kind == Tok::LBrace)
        {
            ++i_;
            Expr e = sum();
            expect(Tok::RBrace, "'}'");
            return e;
        }
        if (peek().kind == Tok::Minus)
        {
            ++i_;
            return negate(exponent());
        }
        if (peek().kind == Tok::Number)
        {
            Expr base = primary(); // x^23 is read as x^{23}
            if (peek().kind != Tok::Caret)
                return base;
            ++i_;
            return power(base, exponent());
        }
        return power_expr();
    }

    Expr group(Tok close, const char* what)
    {
        ++i_;
        Expr e = sum();
        expect(close, what);
        return e;
    }

    Expr primary()
    {
        const Token& tok = peek();
        switch (tok.kind)
        {
            case Tok::Number:
                ++i_;
                return number(parse_decimal(tok.text));
            case Tok::Letter:
                ++i_;
                return symbol(tok.text);
            case Tok::LParen: return group(Tok::RParen, "')'");
            case Tok::LBrace: return group(Tok::RBrace, "'}'");
            case Tok::Frac:
            {
                ++i_;
                if (peek().kind != Tok::LBrace)
                    fail("expected '{' after \\frac");
                Expr num = group(Tok::RBrace, "'}'");
                if (peek().kind != Tok::LBrace)
                    fail("expected '{' for the denominator of \\frac");
                Expr den = group(Tok::RBrace, "'}'");
                return divide(num, den);
            }
            case Tok::Sqrt:
            {
                ++i_;
                if (peek().kind == Tok::LBracket)
                    throw MathError(Errc::UnsupportedConstruct,
                                    "only square roots are supported (offset " + std::to_string(peek().offset) + ")");
                return square_root(primary());
            }
            default: break;
        }
        if (tok.kind == Tok::End)
            fail("");
        fail("unexpected '" + tok.text + "'");
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
};

} // namespace

Expr parse(std::string_view text)
{
    Parser parser(Lexer(text).run());
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw SyntaxError("empty input", 0);
    return parser.top();
}

} // namespace deli
