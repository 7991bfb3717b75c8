// SPDX-License-Identifier: Apache-2.0
#include "support/oracles.hpp"

#include <deli/canonical.hpp>
#include <deli/cas.hpp>
#include <deli/registry.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace deli;
namespace o = deli::oracle;

namespace
{

std::string p(const Expr& e)
{
    return print(e);
}

Expr E(const std::string& s)
{
    return parse(s);
}

Errc code_of(const std::function<void()>& f)
{
    try
    {
        f();
    }
    catch (const MathError& e)
    {
        return e.code();
    }
    ADD_FAILURE() << "no MathError thrown";
    return Errc::InvalidArgument;
}

std::map<std::string, o::Quad> at(const std::string& name, const o::Quad& v)
{
    return {{name, v}};
}

Action act(const std::string& name, std::vector<std::string> args)
{
    Action a;
    a.name = name;
    a.args = std::move(args);
    for (std::size_t i = 0; i < a.args.size(); ++i)
        a.argument_text += (i ? ", " : "") + a.args[i];
    a.raw = name + "(" + a.argument_text + ")";
    return a;
}

} // namespace

TEST(Calculate, Examples)
{
    EXPECT_EQ(p(cas::calculate(E("2+3\\cdot 4"))), "14");
    EXPECT_EQ(p(cas::calculate(E("\\frac{1}{2}+\\frac{1}{3}"))), "\\frac{5}{6}");
    EXPECT_EQ(code_of([] { cas::calculate(E("x+1")); }), Errc::NonNumeric);
}

TEST(Calculate, AgreesWithRationalArithmetic)
{
    o::Generator g(11);
    for (int i = 0; i < 50; ++i)
    {
        Rational a = g.small_rational(), b = g.small_rational(), c = g.small_rational();
        if (c == 0)
            c = 1;
        Expr e = add({number(a), divide(multiply({number(b), number(b)}), number(c))});
        EXPECT_EQ(cas::calculate(e).number(), a + b * b / c);
    }
}

TEST(Substitute, Examples)
{
    EXPECT_EQ(p(cas::substitute(E("ax+2bx=3"), {E("x=1")})), "a + 2b=3");
    EXPECT_EQ(p(cas::substitute(E("x^2"), {E("x=3")})), "9");
    EXPECT_EQ(p(cas::substitute(E("x+y"), {E("y=x")})), "2x");
    EXPECT_EQ(code_of([] { cas::substitute(E("x"), {E("x+1=2")}); }), Errc::BadCondition);
}

TEST(Substitute, IsSimultaneous)
{
    // sequential application would give 2y or 2x
    EXPECT_EQ(p(cas::substitute(E("x-y"), {E("x=y"), E("y=x")})), "-x + y");
}

TEST(Substitute, AgreesWithExpansionOracle)
{
    o::Generator g(5);
    for (int i = 0; i < 40; ++i)
    {
        auto s = g.tree(2);
        auto v = g.polynomial(1, 2);
        Expr got = cas::substitute(s.expr, {relation(RelOp::Eq, symbol("z"), v.expr)});
        Expr direct = deli::substitute(s.expr, {{"z", v.expr}});
        EXPECT_EQ(o::expand_tree(got), o::expand_tree(direct)) << p(s.expr);
    }
}

TEST(SolveEq, Examples)
{
    EXPECT_EQ(p(cas::solve_eq(E("2k+1=0"))), "[k=-\\frac{1}{2}]");
    EXPECT_EQ(p(cas::solve_eq(E("3y-3=3"))), "[y=2]");
    EXPECT_EQ(p(cas::solve_eq(E("x^2-1=0"))), "[x=-1, x=1]");
    EXPECT_EQ(p(cas::solve_eq(E("x^2+1=0"))), "[]");
    EXPECT_EQ(p(cas::solve_eq(E("x^3-x=0"))), "[x=-1, x=0, x=1]");
    EXPECT_EQ(p(cas::solve_eq(E("\\frac{x^2-1}{x-1}=0"))), "[x=-1]");
}

TEST(SolveEq, Errors)
{
    try
    {
        cas::solve_eq(E("x+y=1"));
        FAIL();
    }
    catch (const MathError& e)
    {
        EXPECT_EQ(e.code(), Errc::NotUnivariate);
        EXPECT_NE(std::string(e.what()).find("x, y"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("partial_solve"), std::string::npos);
    }
    EXPECT_EQ(code_of([] { cas::solve_eq(E("x^3-2=0")); }), Errc::UnsupportedDegree);
}

// Every root back-substitutes to an exact zero, and the number of roots
// matches the discriminant.
TEST(SolveEq, RootsBackSubstituteExactly)
{
    o::Generator g(2024, 1);
    for (int i = 0; i < 200; ++i)
    {
        Rational a = g.small_rational();
        if (a == 0)
            a = 1;
        Rational b = g.small_rational(), c = g.small_rational();
        bool quadratic = i % 2 == 1;
        Expr lhs = quadratic ? add({multiply({number(a), power(symbol("x"), number(2))}),
                                    multiply({number(b), symbol("x")}), number(c)})
                             : add({multiply({number(a), symbol("x")}), number(b)});
        Expr eq = relation(RelOp::Eq, lhs, number(g.small_rational()));
        Expr roots = cas::solve_eq(eq);
        std::size_t expected = 1;
        if (quadratic)
        {
            Rational disc = b * b - 4 * a * (c - eq.arg(1).number());
            expected = disc > 0 ? 2 : disc == 0 ? 1 : 0;
        }
        ASSERT_EQ(roots.args().size(), expected) << p(eq) << " -> " << p(roots);
        for (const auto& r: roots.args())
        {
            o::Quad v = o::evaluate(r.arg(1), {});
            EXPECT_TRUE(o::evaluate_difference(eq, at("x", v)).is_zero()) << p(eq) << " at " << p(r);
            Expr back = cas::substitute(eq, {r});
            EXPECT_TRUE(canonicalize(back).numerator.is_zero()) << p(back);
        }
    }
}

TEST(SolveIneq, Examples)
{
    EXPECT_EQ(p(cas::solve_ineq(E("2x-4>0"))), "[x>2]");
    EXPECT_EQ(p(cas::solve_ineq(E("-3x\\ge 6"))), "[x\\le -2]");
    EXPECT_EQ(p(cas::solve_ineq(E("x^2<0"))), "[]");
    EXPECT_EQ(p(cas::solve_ineq(E("x^2-1\\le 0"))), "[-1\\le x\\le 1]");
    EXPECT_EQ(p(cas::solve_ineq(E("x^2-1>0"))), "[x<-1, x>1]");
    EXPECT_EQ(p(cas::solve_ineq(E("x^2\\le 0"))), "[x=0]");
    EXPECT_EQ(p(cas::solve_ineq(E("x^2+1>0"))), "[-\\infty<x<\\infty]");
    EXPECT_EQ(code_of([] { cas::solve_ineq(E("x+y>0")); }), Errc::NotUnivariate);
}

TEST(SolveIneq, AgreesPointwiseWithInput)
{
    o::Generator g(77, 1);
    const RelOp ops[] = {RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge};
    for (int i = 0; i < 60; ++i)
    {
        Rational a = g.small_rational(), b = g.small_rational(), c = g.small_rational();
        if (a == 0)
            a = -1;
        Expr lhs = add({multiply({number(a), power(symbol("x"), number(2))}), multiply({number(b), symbol("x")}),
                        number(c)});
        Expr ineq = relation(ops[i % 4], lhs, number(0));
        Expr sol = cas::solve_ineq(ineq);
        for (int k = 0; k < 30; ++k)
        {
            auto point = at("x", o::Quad::of(g.small_rational(12, 6)));
            EXPECT_EQ(o::holds(sol, point), o::holds(ineq, point)) << p(ineq) << " -> " << p(sol);
        }
    }
}

TEST(SolveMultiEq, Examples)
{
    EXPECT_EQ(p(cas::solve_multi_eq({E("x+y=3"), E("x-y=1")})), "[x=2, y=1]");
    EXPECT_EQ(p(cas::solve_multi_eq({E("a+2b=3"), E("a-b=0")})), "[a=1, b=1]");
    EXPECT_EQ(code_of([] { cas::solve_multi_eq({E("x+y=1"), E("x+y=2")}); }), Errc::Inconsistent);
    EXPECT_EQ(code_of([] { cas::solve_multi_eq({E("xy=1")}); }), Errc::NonLinearSystem);
}

TEST(SolveMultiEq, UnderdeterminedBindsPivotsToFreeSymbols)
{
    Expr sol = cas::solve_multi_eq({E("x+y+z=1"), E("x-y=2")});
    ASSERT_EQ(sol.args().size(), 2u);
    for (const auto& z: {Rational(0), Rational(3), Rational(-5, 2)})
    {
        std::map<std::string, o::Quad> point {{"z", o::Quad::of(z)}};
        for (const auto& b: sol.args())
            point[b.arg(0).name()] = o::evaluate(b.arg(1), {{"z", o::Quad::of(z)}});
        EXPECT_TRUE(o::evaluate_difference(E("x+y+z=1"), point).is_zero());
        EXPECT_TRUE(o::evaluate_difference(E("x-y=2"), point).is_zero());
    }
}

namespace
{

// Cramer's rule with cofactor determinants.
Rational det(const std::vector<std::vector<Rational>>& m)
{
    std::size_t n = m.size();
    if (n == 1)
        return m[0][0];
    Rational total = 0;
    for (std::size_t c = 0; c < n; ++c)
    {
        std::vector<std::vector<Rational>> minor;
        for (std::size_t r = 1; r < n; ++r)
        {
            std::vector<Rational> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c)
                    row.push_back(m[r][k]);
            minor.push_back(row);
        }
        total += (c % 2 ? -1 : 1) * m[0][c] * det(minor);
    }
    return total;
}

} // namespace

TEST(SolveMultiEq, AgreesWithCramerOracle)
{
    o::Generator g(99);
    int solved = 0;
    for (int i = 0; i < 100; ++i)
    {
        std::size_t n = i % 2 ? 3 : 2;
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
        std::vector<Rational> rhs(n);
        std::vector<Expr> eqs;
        for (std::size_t r = 0; r < n; ++r)
        {
            std::vector<Expr> terms;
            for (std::size_t c = 0; c < n; ++c)
            {
                a[r][c] = g.uniform(-5, 5);
                terms.push_back(multiply({number(a[r][c]), symbol(o::names()[c])}));
            }
            rhs[r] = g.small_rational();
            eqs.push_back(relation(RelOp::Eq, add(terms), number(rhs[r])));
        }
        Rational d = det(a);
        if (d == 0)
            continue;
        ++solved;
        Expr sol = cas::solve_multi_eq(eqs);
        ASSERT_EQ(sol.args().size(), n);
        for (std::size_t c = 0; c < n; ++c)
        {
            auto m = a;
            for (std::size_t r = 0; r < n; ++r)
                m[r][c] = rhs[r];
            Rational expected = det(m) / d;
            const Expr& binding = sol.arg(c);
            EXPECT_EQ(binding.arg(0).name(), o::names()[c]);
            EXPECT_EQ(o::evaluate(binding.arg(1), {}).a, expected);
        }
    }
    EXPECT_GT(solved, 80);
}

TEST(SolveMultiIneq, Examples)
{
    EXPECT_EQ(p(cas::solve_multi_ineq({E("x>1"), E("x<3")})), "[1<x<3]");
    EXPECT_EQ(p(cas::solve_multi_ineq({E("x>2"), E("x<1")})), "[]");
    EXPECT_EQ(p(cas::solve_multi_ineq({E("x\\ge 0"), E("2x\\le 4")})), "[0\\le x\\le 2]");
    EXPECT_EQ(code_of([] { cas::solve_multi_ineq({E("x>0"), E("y<1")}); }), Errc::NotUnivariate);
}

TEST(SolveMultiIneq, IsPointwiseIntersection)
{
    o::Generator g(4242, 1);
    const RelOp ops[] = {RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge};
    for (int i = 0; i < 50; ++i)
    {
        std::vector<Expr> system;
        int count = g.uniform(2, 3);
        for (int k = 0; k < count; ++k)
        {
            int degree = g.uniform(1, 2);
            Rational a = g.small_rational();
            if (a == 0)
                a = 1;
            Expr lhs = degree == 1 ? add({multiply({number(a), symbol("x")}), number(g.small_rational())})
                                   : add({multiply({number(a), power(symbol("x"), number(2))}),
                                          multiply({number(g.small_rational()), symbol("x")}),
                                          number(g.small_rational())});
            system.push_back(relation(ops[g.uniform(0, 3)], lhs, number(0)));
        }
        Expr together = cas::solve_multi_ineq(system);
        std::vector<Expr> separate;
        for (const auto& s: system)
            separate.push_back(cas::solve_ineq(s));
        for (int k = 0; k < 40; ++k)
        {
            auto point = at("x", o::Quad::of(g.small_rational(10, 4)));
            bool all = true;
            for (const auto& s: separate)
                all = all && o::holds(s, point);
            EXPECT_EQ(o::holds(together, point), all) << p(together);
        }
    }
}

TEST(PartialSolve, Examples)
{
    auto check = [](const std::string& eq, const std::string& u, const std::string& expected) {
        Expr sol = cas::partial_solve(E(eq), u);
        ASSERT_EQ(sol.args().size(), 1u) << p(sol);
        EXPECT_TRUE(is_equiv(sol.arg(0), E(expected))) << p(sol);
    };
    check("a+2b=3", "a", "a=3-2b");
    check("xy=6", "y", "y=\\frac{6}{x}");
    check("(a+2b)y-(a+2b)=3", "y", "y=\\frac{3}{a+2b}+1");
    EXPECT_EQ(p(cas::partial_solve(E("x^2=a"), "x")), "[x=-\\sqrt{a}, x=\\sqrt{a}]");
    EXPECT_EQ(p(cas::partial_solve(E("x^2-4a^2=0"), "x")), "[x=-2a, x=2a]");
    EXPECT_EQ(code_of([] { cas::partial_solve(E("x=1"), "y"); }), Errc::SymbolAbsent);
    EXPECT_EQ(code_of([] { cas::partial_solve(E("x^3=a"), "x"); }), Errc::UnsupportedDegree);
}

TEST(PartialSolve, BackSubstitution)
{
    Expr eq = E("(a+2b)y-(a+2b)=3");
    Expr sol = cas::partial_solve(eq, "y");
    o::Generator g(3);
    for (int i = 0; i < 20; ++i)
    {
        Rational a = g.small_rational(), b = g.small_rational();
        if (a + 2 * b == 0)
            continue;
        std::map<std::string, o::Quad> point {{"a", o::Quad::of(a)}, {"b", o::Quad::of(b)}};
        point["y"] = o::evaluate(sol.arg(0).arg(1), point);
        EXPECT_TRUE(o::evaluate_difference(eq, point).is_zero());
    }
}

TEST(Expand, Examples)
{
    EXPECT_EQ(p(cas::expand(E("(x+1)^2"))), "x^2 + 2x + 1");
    EXPECT_EQ(p(cas::expand(E("(x+y)(x-y)"))), "x^2 - y^2");
    EXPECT_EQ(p(cas::expand(E("3(y-1)"))), "3y - 3");
}

TEST(Factor, Examples)
{
    EXPECT_EQ(p(cas::factor(E("x^2+2x+1"))), "(x + 1)^2");
    EXPECT_EQ(p(cas::factor(E("x^2-4"))), "(x - 2)(x + 2)");
    EXPECT_EQ(p(cas::factor(E("x^2+x+1"))), "x^2 + x + 1");
    EXPECT_EQ(p(cas::factor(E("-2x^2+2"))), "-2(x - 1)(x + 1)");
    EXPECT_EQ(code_of([] { cas::factor(E("\\frac{1}{x}")); }), Errc::NonPolynomial);
}

TEST(Factor, IrreducibleQuadraticsStayWhole)
{
    // discriminant oracle: b^2 - 4c not a rational square means no rational factorization
    o::Generator g(8, 1);
    for (int i = 0; i < 40; ++i)
    {
        int b = g.uniform(-9, 9), c = g.uniform(-9, 9);
        int disc = b * b - 4 * c;
        bool square = false;
        for (int r = 0; r * r <= disc; ++r)
            square = square || r * r == disc;
        Expr q = add({power(symbol("x"), number(2)), multiply({number(b), symbol("x")}), number(c)});
        Expr f = cas::factor(q);
        EXPECT_EQ(f.kind() == NodeKind::Product || f.kind() == NodeKind::Power, square) << p(q) << " -> " << p(f);
    }
}

TEST(Factor, ExpandBackMatchesOracle)
{
    o::Generator g(1234);
    for (int i = 0; i < 200; ++i)
    {
        auto s = g.polynomial(4, 4);
        Expr f = cas::factor(cas::expand(s.expr));
        EXPECT_EQ(o::expand_tree(cas::expand(f)), s.poly) << p(s.expr) << " -> " << p(f);
        EXPECT_EQ(o::expand_tree(f), s.poly) << p(s.expr) << " -> " << p(f);
    }
}

TEST(Collect, Examples)
{
    EXPECT_EQ(p(cas::collect(E("ay+2by-a-2b"), "y")), "(a + 2b)y - (a + 2b)");
    EXPECT_EQ(p(cas::collect(E("a(y-1)+2b(y-1)=3"), "y")), "(a + 2b)y - (a + 2b)=3");
    EXPECT_EQ(p(cas::collect(E("x^2+2x+x"), "x")), "x^2 + 3x");
    EXPECT_EQ(p(cas::collect(E("ax+bx+c"), "x")), "(a + b)x + c");
}

TEST(Collect, PreservesEquivalence)
{
    o::Generator g(31);
    for (int i = 0; i < 60; ++i)
    {
        auto s = g.tree(2);
        for (const auto& x: o::names())
        {
            Expr c = cas::collect(s.expr, x);
            EXPECT_TRUE(is_equiv(c, s.expr)) << p(s.expr) << " -> " << p(c);
            EXPECT_EQ(o::expand_tree(c), s.poly);
        }
    }
}

TEST(CompleteTheSquare, Examples)
{
    EXPECT_EQ(p(cas::complete_the_square(E("x^2+2x+3"))), "(x + 1)^2 + 2");
    EXPECT_EQ(p(cas::complete_the_square(E("x^2-6x"))), "(x - 3)^2 - 9");
    EXPECT_EQ(p(cas::complete_the_square(E("2x^2+4x"))), "2(x + 1)^2 - 2");
    EXPECT_EQ(code_of([] { cas::complete_the_square(E("x^3")); }), Errc::NotQuadratic);
    EXPECT_EQ(code_of([] { cas::complete_the_square(E("xy")); }), Errc::NotQuadratic);
}

TEST(CompleteTheSquare, ExpandBackIsExact)
{
    o::Generator g(555, 1);
    for (int i = 0; i < 100; ++i)
    {
        Rational a = g.small_rational();
        if (a == 0)
            a = 2;
        Expr q = add({multiply({number(a), power(symbol("x"), number(2))}),
                      multiply({number(g.small_rational()), symbol("x")}), number(g.small_rational())});
        Expr s = cas::complete_the_square(q);
        EXPECT_EQ(o::expand_tree(s), o::expand_tree(q)) << p(q) << " -> " << p(s);
    }
}

TEST(Registry, DescriptorsAreUniqueAndRender)
{
    Registry r = Registry::standard();
    std::set<std::string> names;
    for (const auto& d: r.descriptors())
        EXPECT_TRUE(names.insert(d.name).second) << d.name;
    EXPECT_EQ(names.size(), 12u);
    EXPECT_EQ(r.find("expand")->render(),
              "expand(expression: str) -> new expression: str: Multiply out products and powers into a sum of "
              "terms. e.g. expand($(x+1)^2$) -> $x^2 + 2x + 1$");
    EXPECT_EQ(r.find("think")->category, Category::Thinking);
    EXPECT_EQ(r.find("partial_solve")->category, Category::EquationSolving);
}

TEST(Registry, EveryDocstringExampleExecutes)
{
    Registry r = Registry::standard([](const std::string& thought) {
        EXPECT_EQ(thought, "both terms share the factor a+2b");
        return std::string("the equation can be written as (a+2b)(y-1)=3");
    });
    for (const auto& d: r.descriptors())
    {
        const std::string& call = d.example_call;
        auto open = call.find('(');
        std::string inner = call.substr(open + 1, call.size() - open - 2);
        Action a = act(d.name, split_top_level(inner));
        a.argument_text = inner;
        InvocationResult res = r.invoke(a);
        EXPECT_TRUE(res.ok()) << d.name << ": " << res.feedback();
        EXPECT_EQ(res.feedback(), d.example_output) << d.name;
    }
}

TEST(Registry, InvokeFeedback)
{
    Registry r = Registry::standard();
    EXPECT_EQ(r.invoke(act("solve_eq", {"\"2k+1=0\""})).feedback(), "[$k=-\\frac{1}{2}$]");
    auto bad = r.invoke(act("solve_eq", {"x+y=1"}));
    EXPECT_EQ(bad.error, Errc::NotUnivariate);
    EXPECT_NE(bad.feedback().find("x, y"), std::string::npos);
    EXPECT_EQ(r.invoke(act("frobnicate", {"x"})).error, Errc::UnknownInterface);
    EXPECT_EQ(r.invoke(act("expand", {"x", "y"})).error, Errc::ArityMismatch);
    EXPECT_EQ(r.invoke(act("expand", {})).error, Errc::ArityMismatch);
    EXPECT_EQ(r.invoke(act("collect", {"x^2", "x+1"})).error, Errc::InvalidArgument);
    EXPECT_EQ(r.invoke(act("expand", {"x +* 2"})).error, Errc::SyntaxError);
    EXPECT_EQ(r.invoke(act("think", {"anything"})).error, Errc::GatewayError);
    EXPECT_THROW((void)r.think("anything"), GatewayError);
    EXPECT_EQ(r.invoke(act("solve_multi_eq", {"\\{x+y=3, x-y=1\\}"})).feedback(), "[$x=2$, $y=1$]");
    EXPECT_EQ(r.invoke(act("substitute", {"$ax+2bx=3$", "{x=1}"})).feedback(), "$a + 2b=3$");
    Action malformed;
    malformed.malformed = true;
    malformed.raw = "Action: solve_eq(";
    EXPECT_EQ(r.invoke(malformed).error, Errc::MalformedAction);
}

TEST(Registry, InvokeIsTotal)
{
    Registry r = Registry::standard([](const std::string&) -> std::string {
        throw GatewayError("Transport", "down", true);
    });
    o::Generator g(17);
    const std::string pieces[] = {"x", "+", "(", ")", "=", "2", "^", "\\frac{", "}", ",", "y", "<", "$", "-", "{"};
    for (const auto& d: r.descriptors())
        for (int i = 0; i < 40; ++i)
        {
            std::string text;
            int len = g.uniform(0, 10);
            for (int k = 0; k < len; ++k)
                text += pieces[g.uniform(0, 14)];
            Action a = act(d.name, split_top_level(text));
            a.argument_text = text;
            InvocationResult res;
            EXPECT_NO_THROW(res = r.invoke(a)) << d.name << "(" << text << ")";
            EXPECT_NE(res.ok(), res.error.has_value());
        }
}

TEST(Registry, SplitTopLevel)
{
    EXPECT_EQ(split_top_level("ax+2bx=3, x=1"), (std::vector<std::string> {"ax+2bx=3", "x=1"}));
    EXPECT_EQ(split_top_level("f(a, b), \\{x, y\\}, [1, 2]"),
              (std::vector<std::string> {"f(a, b)", "\\{x, y\\}", "[1, 2]"}));
    EXPECT_TRUE(split_top_level("").empty());
}
