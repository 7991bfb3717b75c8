// SPDX-License-Identifier: Apache-2.0
#include <deli/cas.hpp>
#include <deli/registry.hpp>

#include <algorithm>
#include <cctype>

namespace deli
{

std::string_view category_name(Category c) noexcept
{
    switch (c)
    {
        case Category::NumericalComputation: return "numerical-computation";
        case Category::EquationSolving: return "equation-solving";
        case Category::ExpressionTransformation: return "expression-transformation";
        case Category::Thinking: return "thinking";
    }
    return "unknown";
}

namespace
{

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string strip_quotes(std::string s)
{
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        s = trim(s.substr(1, s.size() - 2));
    return s;
}

// Drops quoting and math delimiters around an argument.
std::string clean(const std::string& raw)
{
    std::string s = strip_quotes(raw);
    s.erase(std::remove(s.begin(), s.end(), '$'), s.end());
    return trim(s);
}

std::string_view role_hint(ArgRole role)
{
    switch (role)
    {
        case ArgRole::Expression: return "str";
        case ArgRole::List: return "list";
        case ArgRole::Symbol: return "symbol";
        case ArgRole::Text: return "str";
    }
    return "str";
}

Expr parse_argument(const std::string& text, std::size_t index)
{
    try
    {
        return parse(text);
    }
    catch (const MathError& e)
    {
        throw MathError(e.code(), "could not read argument " + std::to_string(index + 1) + " (" + text +
                                      "): " + e.what());
    }
}

// A bracketed list such as {x=1, y=2} or [x>1, x<3] becomes its items.
std::vector<std::string> list_items(const std::string& arg)
{
    std::string s = arg;
    auto strip = [&](std::string_view open, std::string_view close) {
        if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close))
        {
            s = s.substr(open.size(), s.size() - open.size() - close.size());
            return true;
        }
        return false;
    };
    bool bracketed = strip("\\left\\{", "\\right\\}") || strip("\\{", "\\}") || strip("[", "]");
    if (!bracketed && s.starts_with("{") && s.ends_with("}"))
    {
        // plain braces group a term unless they enclose a list or a relation
        auto inner = s.substr(1, s.size() - 2);
        bool relation = inner.find_first_of("=<>") != std::string::npos || inner.find("\\le") != std::string::npos ||
                        inner.find("\\ge") != std::string::npos;
        if (split_top_level(inner).size() > 1 || relation)
        {
            s = inner;
            bracketed = true;
        }
    }
    if (!bracketed)
        return {arg};
    std::vector<std::string> out;
    for (auto& item: split_top_level(s))
        if (auto t = clean(item); !t.empty())
            out.push_back(t);
    return out;
}

std::string signature(const InterfaceDescriptor& d)
{
    std::string out = d.name + "(";
    for (std::size_t i = 0; i < d.args.size(); ++i)
    {
        if (i)
            out += ", ";
        out += d.args[i].name;
        out += ": ";
        out += role_hint(d.args[i].role);
    }
    return out + ")";
}

InterfaceDescriptor make(std::string name, std::vector<ArgSpec> args, std::string output, std::string description,
                         std::string call, std::string result, Category category)
{
    return {std::move(name), std::move(args), std::move(output), std::move(description),
            std::move(call), std::move(result), category};
}

std::vector<InterfaceDescriptor> standard_descriptors()
{
    using R = ArgRole;
    const auto num = Category::NumericalComputation;
    const auto solve = Category::EquationSolving;
    const auto trans = Category::ExpressionTransformation;
    return {
        make("calculate", {{"expression", R::Expression}}, "value: str",
             "Compute the exact value of an expression that contains no unknowns",
             "calculate($\\frac{1}{2}+\\frac{1}{3}$)", "$\\frac{5}{6}$", num),
        make("substitute", {{"expression", R::Expression}, {"conditions", R::List}}, "new expression: str",
             "Replace symbols by the values given as conditions of the form symbol = value, then simplify",
             "substitute($ax+2bx=3$, $x=1$)", "$a + 2b=3$", num),
        make("solve_eq", {{"equation", R::Expression}}, "solutions: list",
             "Find every real solution of an equation in one unknown",
             "solve_eq($2k+1=0$)", "[$k=-\\frac{1}{2}$]", solve),
        make("solve_ineq", {{"inequation", R::Expression}}, "solutions: list",
             "Find the values of the unknown that satisfy an inequality in one unknown",
             "solve_ineq($2x-4>0$)", "[$x>2$]", solve),
        make("solve_multi_eq", {{"equations", R::List}}, "solutions: list",
             "Solve a system of linear equations for all of its unknowns",
             "solve_multi_eq($x+y=3$, $x-y=1$)", "[$x=2$, $y=1$]", solve),
        make("solve_multi_ineq", {{"inequations", R::List}}, "solutions: list",
             "Find the values of one unknown that satisfy several inequalities at once",
             "solve_multi_ineq($x>1$, $x<3$)", "[$1<x<3$]", solve),
        make("partial_solve", {{"equation", R::Expression}, {"unknown", R::Symbol}}, "solutions: list",
             "Express the chosen unknown in terms of the other symbols of an equation",
             "partial_solve($a+2b=3$, a)", "[$a=-2b + 3$]", solve),
        make("expand", {{"expression", R::Expression}}, "new expression: str",
             "Multiply out products and powers into a sum of terms",
             "expand($(x+1)^2$)", "$x^2 + 2x + 1$", trans),
        make("factor", {{"expression", R::Expression}}, "new expression: str",
             "Write a polynomial as a product of factors with rational coefficients",
             "factor($x^2-4$)", "$(x - 2)(x + 2)$", trans),
        make("collect", {{"expression", R::Expression}, {"symbol", R::Symbol}}, "new expression: str",
             "Group the terms by powers of a symbol, factoring each coefficient",
             "collect($ay+2by-a-2b$, y)", "$(a + 2b)y - (a + 2b)$", trans),
        make("complete_the_square", {{"expression", R::Expression}}, "new expression: str",
             "Rewrite a quadratic in one unknown as a multiple of a square plus a constant",
             "complete_the_square($x^2-6x$)", "$(x - 3)^2 - 9$", trans),
        make("think", {{"thought", R::Text}}, "conclusion: str",
             "Ask the language model to reason about the given text and state a conclusion",
             "think(both terms share the factor a+2b)", "the equation can be written as (a+2b)(y-1)=3",
             Category::Thinking),
    };
}

std::string wrap(const Expr& e)
{
    return "$" + print(e) + "$";
}

} // namespace

std::string InterfaceDescriptor::render() const
{
    return signature(*this) + " -> " + output + ": " + description + ". e.g. " + example_call + " -> " +
           example_output;
}

std::string InvocationResult::feedback() const
{
    if (error)
        return "Error (" + std::string(errc_name(*error)) + "): " + message;
    if (text)
        return *text;
    if (value->kind() == NodeKind::Set)
    {
        std::string out = "[";
        for (std::size_t i = 0; i < value->args().size(); ++i)
        {
            if (i)
                out += ", ";
            out += wrap(value->arg(i));
        }
        return out + "]";
    }
    return wrap(*value);
}

InvocationResult InvocationResult::success(Expr e)
{
    InvocationResult r;
    r.value = std::move(e);
    return r;
}

InvocationResult InvocationResult::success(std::string text)
{
    InvocationResult r;
    r.text = std::move(text);
    return r;
}

InvocationResult InvocationResult::failure(Errc code, std::string message)
{
    InvocationResult r;
    r.error = code;
    r.message = std::move(message);
    return r;
}

std::vector<std::string> split_top_level(std::string_view text)
{
    std::vector<std::string> out;
    int depth = 0;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i)
    {
        char c = text[i];
        if (c == '\\' && i + 1 < text.size() && (text[i + 1] == '{' || text[i + 1] == '}'))
        {
            depth += text[i + 1] == '{' ? 1 : -1;
            current += text.substr(i, 2);
            ++i;
            continue;
        }
        if (c == '(' || c == '{' || c == '[')
            ++depth;
        else if (c == ')' || c == '}' || c == ']')
            --depth;
        if (c == ',' && depth == 0)
        {
            out.push_back(trim(current));
            current.clear();
            continue;
        }
        current += c;
    }
    if (!trim(current).empty() || !out.empty())
        out.push_back(trim(current));
    return out;
}

Registry Registry::standard(ThinkFn think)
{
    Registry r;
    r.descriptors_ = standard_descriptors();
    r.think_ = std::move(think);
    return r;
}

const InterfaceDescriptor* Registry::find(std::string_view name) const
{
    for (const auto& d: descriptors_)
        if (d.name == name)
            return &d;
    return nullptr;
}

std::string Registry::think(const std::string& thought) const
{
    if (!think_)
        throw GatewayError("NoBackend", "think needs a language model, but none is configured", false);
    return think_(thought);
}

std::string Registry::render_docs(const std::vector<std::string>& names) const
{
    std::string out;
    for (const auto& d: descriptors_)
    {
        if (!names.empty() && std::find(names.begin(), names.end(), d.name) == names.end())
            continue;
        out += d.render();
        out += '\n';
    }
    return out;
}

InvocationResult Registry::invoke(const Action& action) const
{
    if (action.malformed)
        return InvocationResult::failure(Errc::MalformedAction,
                                         action.problem.empty() ? "could not read the action " + action.raw
                                                                : action.problem);
    const InterfaceDescriptor* d = find(action.name);
    if (!d)
    {
        std::string names;
        for (const auto& known: descriptors_)
            names += (names.empty() ? "" : ", ") + known.name;
        return InvocationResult::failure(Errc::UnknownInterface,
                                         "there is no interface named " + action.name + "; available: " + names);
    }
    try
    {
        if (d->name == "think")
        {
            std::string thought = strip_quotes(action.argument_text);
            if (thought.empty())
                return InvocationResult::failure(Errc::ArityMismatch, "think needs a thought to reason about");
            try
            {
                return InvocationResult::success(think(thought));
            }
            catch (const GatewayError& e)
            {
                return InvocationResult::failure(Errc::GatewayError, e.what());
            }
        }

        std::vector<std::string> raw;
        for (const auto& a: action.args)
            if (auto c = clean(a); !c.empty())
                raw.push_back(c);

        bool variadic = !d->args.empty() && d->args.back().role == ArgRole::List;
        std::size_t fixed = d->args.size() - (variadic ? 1 : 0);
        if (raw.size() < d->args.size() || (!variadic && raw.size() > fixed))
            return InvocationResult::failure(
                Errc::ArityMismatch, d->name + " takes " +
                                         (variadic ? std::to_string(fixed) + " argument(s) plus a list"
                                                   : std::to_string(fixed) + " argument(s)") +
                                         " as in " + signature(*d) + ", but received " +
                                         std::to_string(raw.size()));

        std::vector<Expr> values;
        std::string symbol_arg;
        for (std::size_t i = 0; i < fixed; ++i)
        {
            if (d->args[i].role == ArgRole::Symbol)
            {
                Expr s = parse_argument(raw[i], i);
                if (!s.is_symbol())
                    return InvocationResult::failure(Errc::InvalidArgument, "argument " + std::to_string(i + 1) +
                                                                                " of " + d->name +
                                                                                " must be a single symbol, got " +
                                                                                raw[i]);
                symbol_arg = s.name();
            }
            else
                values.push_back(parse_argument(raw[i], i));
        }
        std::vector<Expr> list;
        if (variadic)
            for (std::size_t i = fixed; i < raw.size(); ++i)
                for (auto& item: list_items(raw[i]))
                    list.push_back(parse_argument(item, i));

        const std::string& n = d->name;
        Expr result;
        if (n == "calculate")
            result = cas::calculate(values[0]);
        else if (n == "substitute")
            result = cas::substitute(values[0], list);
        else if (n == "solve_eq")
            result = cas::solve_eq(values[0]);
        else if (n == "solve_ineq")
            result = cas::solve_ineq(values[0]);
        else if (n == "solve_multi_eq")
            result = cas::solve_multi_eq(list);
        else if (n == "solve_multi_ineq")
            result = cas::solve_multi_ineq(list);
        else if (n == "partial_solve")
            result = cas::partial_solve(values[0], symbol_arg);
        else if (n == "expand")
            result = cas::expand(values[0]);
        else if (n == "factor")
            result = cas::factor(values[0]);
        else if (n == "collect")
            result = cas::collect(values[0], symbol_arg);
        else if (n == "complete_the_square")
            result = cas::complete_the_square(values[0]);
        else
            return InvocationResult::failure(Errc::UnknownInterface, "no implementation bound to " + n);
        return InvocationResult::success(result);
    }
    catch (const MathError& e)
    {
        return InvocationResult::failure(e.code(), e.what());
    }
    catch (const std::exception& e)
    {
        return InvocationResult::failure(Errc::InvalidArgument, e.what());
    }
}

} // namespace deli
