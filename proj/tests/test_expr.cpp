// SPDX-License-Identifier: Apache-2.0
#include "support/oracles.hpp"

#include <deli/canonical.hpp>
#include <deli/expr.hpp>

#include <gtest/gtest.h>

using namespace deli;

namespace
{

Expr roundtrip(const Expr& e)
{
    return parse(print(e));
}

std::size_t syntax_offset(const std::string& text)
{
    try
    {
        parse(text);
    }
    catch (const SyntaxError& err)
    {
        return err.offset();
    }
    return std::string::npos;
}

} // namespace

TEST(Parse, WorkedEquationIsSumOfProducts)
{
    Expr e = parse("a(y-1)+2b(y-1)=3");
    ASSERT_EQ(e.category(), ExprCategory::Equation);
    ASSERT_EQ(e.kind(), NodeKind::Relation);
    const Expr& lhs = e.arg(0);
    ASSERT_EQ(lhs.kind(), NodeKind::Sum);
    ASSERT_EQ(lhs.args().size(), 2u);
    EXPECT_EQ(lhs.arg(0).kind(), NodeKind::Product);
    EXPECT_EQ(lhs.arg(1).kind(), NodeKind::Product);
    EXPECT_EQ(lhs.arg(1).args().size(), 3u); // 2, b, (y-1)
    EXPECT_EQ(e.arg(1), number(3));
}

TEST(Parse, FracTimesSymbol)
{
    EXPECT_EQ(parse("\\frac{1}{2}x"), multiply({number(Rational(1, 2)), symbol("x")}));
}

TEST(Parse, RejectsDoubleOperatorAtOffset)
{
    EXPECT_EQ(syntax_offset("x +* 2"), 3u);
}

TEST(Parse, Precedence)
{
    // ^ is right associative
    EXPECT_EQ(parse("2^3^2"), power(number(2), power(number(3), number(2))));
    // unary minus binds looser than ^
    EXPECT_EQ(parse("-x^2"), negate(power(symbol("x"), number(2))));
    // implicit product binds tighter than division
    EXPECT_EQ(parse("6/2b"), divide(number(6), multiply({number(2), symbol("b")})));
    EXPECT_EQ(parse("a-b-c"), add({symbol("a"), negate(symbol("b")), negate(symbol("c"))}));
    EXPECT_EQ(parse("(x+1)(x-1)"), multiply({add({symbol("x"), number(1)}), add({symbol("x"), number(-1)})}));
}

TEST(Parse, NotationVariants)
{
    EXPECT_EQ(parse("\\left( x + 1 \\right) \\cdot 2"), parse("(x+1)*2"));
    EXPECT_EQ(parse("x \\le 3"), parse("x<=3"));
    EXPECT_EQ(parse("x \\geq 3"), parse("x>=3"));
    EXPECT_EQ(parse("0.25x"), parse("\\frac{1}{4}x"));
    EXPECT_EQ(parse("x_{1}+x_1"), add({symbol("x_1"), symbol("x_1")}));
    EXPECT_EQ(parse("\\frac { 3 } { 3 - a } - 1"), parse("\\frac{3}{3-a}-1"));
}

TEST(Parse, SolutionSets)
{
    Expr s = parse("[k=-\\frac{1}{2}]");
    ASSERT_EQ(s.category(), ExprCategory::SolutionSet);
    ASSERT_EQ(s.args().size(), 1u);
    EXPECT_EQ(s.arg(0), relation(RelOp::Eq, symbol("k"), number(Rational(-1, 2))));
    EXPECT_TRUE(parse("[]").args().empty());

    Expr i = parse("[1<x\\le 3]").arg(0);
    ASSERT_EQ(i.kind(), NodeKind::Interval);
    EXPECT_EQ(*i.lower(), number(1));
    EXPECT_TRUE(i.lower_strict());
    EXPECT_FALSE(i.upper_strict());

    Expr flipped = parse("[2<x]").arg(0);
    ASSERT_EQ(flipped.kind(), NodeKind::Interval);
    EXPECT_EQ(*flipped.lower(), number(2));
    EXPECT_EQ(flipped.upper(), nullptr);

    Expr all = parse("-\\infty<x<\\infty");
    ASSERT_EQ(all.kind(), NodeKind::Interval);
    EXPECT_EQ(all.lower(), nullptr);
    EXPECT_EQ(all.upper(), nullptr);
}

TEST(Parse, Errors)
{
    EXPECT_THROW(parse(""), SyntaxError);
    EXPECT_THROW(parse("(x+1"), SyntaxError);
    EXPECT_THROW(parse("x=1=2"), SyntaxError);
    EXPECT_THROW(parse("[x+1]"), SyntaxError);
    EXPECT_THROW(parse("[2=x+1]"), SyntaxError);
    EXPECT_THROW(parse("1<x>2"), SyntaxError);
    try
    {
        parse("\\int x dx");
        FAIL() << "expected UnsupportedConstruct";
    }
    catch (const MathError& err)
    {
        EXPECT_EQ(err.code(), Errc::UnsupportedConstruct);
    }
}

TEST(Print, Examples)
{
    EXPECT_EQ(print(multiply({number(Rational(1, 2)), symbol("x")})), "\\frac{1}{2}x");
    Expr x = symbol("x");
    EXPECT_EQ(print(add({power(x, number(2)), multiply({number(2), x}), number(1)})), "x^2 + 2x + 1");
    EXPECT_EQ(print(solution_set({relation(RelOp::Eq, symbol("k"), number(Rational(-1, 2)))})),
              "[k=-\\frac{1}{2}]");
    EXPECT_EQ(print(parse("a(y-1)+2b(y-1)=3")), "a(y - 1) + 2b(y - 1)=3");
    EXPECT_EQ(print(parse("[x>2]")), "[x>2]");
    EXPECT_EQ(print(parse("[x\\le -2]")), "[x\\le -2]");
}

TEST(Print, RoundTripHandPicked)
{
    for (const char* text: {"x^2 + 2x + 1", "-x^2", "(-2)^2", "-2^2", "x(-y)", "x \\cdot 2", "-(a + b)",
                            "a - (b + c)", "\\frac{a}{b}x", "-\\frac{1}{2}x", "\\sqrt{x}^2", "x^{-1}", "x^{10}",
                            "(x^2)^3", "2\\sqrt{3}", "x_1y", "x_{12}^2", "1<x\\le 3", "[x=1, x=-1]", "[]",
                            "-\\infty<x<\\infty", "[x\\ge \\frac{1}{2}]", "-x \\cdot 2", "2 \\cdot 3",
                            "\\frac{3}{3 - a} - 1", "(a + 2b)y - (a + 2b)=3", "--x", "x - -2"})
    {
        Expr e = parse(text);
        EXPECT_EQ(roundtrip(e), e) << text << " printed as " << print(e);
    }
}

TEST(Print, RoundTripRandomTrees)
{
    oracle::Generator gen(20240611);
    for (int i = 0; i < 300; ++i)
    {
        Expr e = gen.tree(3).expr;
        EXPECT_EQ(roundtrip(e), e) << print(e);
        // also through canonical re-expression
        Expr c = to_expr(canonicalize(e));
        EXPECT_EQ(roundtrip(c), c) << print(c);
    }
}

TEST(Expr, FreeSymbolsAndSubstitute)
{
    Expr e = parse("a(y-1)+2b(y-1)=3");
    EXPECT_EQ(e.free_symbols(), (std::vector<std::string> {"a", "b", "y"}));
    Expr s = substitute(parse("x+y"), {{"x", symbol("y")}, {"y", symbol("x")}});
    EXPECT_EQ(s, parse("y+x"));
}

TEST(Canonical, Examples)
{
    CanonicalForm sq = canonicalize(parse("(x+1)^2"));
    EXPECT_EQ(sq.numerator, *as_polynomial(parse("x^2+2x+1")));
    EXPECT_TRUE(sq.is_polynomial());

    CanonicalForm q = canonicalize(parse("\\frac{x^2-1}{x-1}"));
    EXPECT_EQ(print(to_expr(q.numerator)), "x^2 - 1");
    EXPECT_EQ(print(to_expr(q.denominator)), "x - 1");

    CanonicalForm eq = canonicalize(parse("a+2b=3"));
    EXPECT_EQ(print(to_expr(eq.numerator)), "a + 2b - 3");
    EXPECT_TRUE(eq.is_polynomial());
}

TEST(Canonical, RadicalsAndRationalization)
{
    EXPECT_EQ(print(to_expr(canonicalize(parse("\\sqrt{8}")))), "2\\sqrt{2}");
    EXPECT_EQ(print(to_expr(canonicalize(parse("\\frac{1}{\\sqrt{2}}")))), "\\frac{1}{2}\\sqrt{2}");
    EXPECT_EQ(canonicalize(parse("(1+\\sqrt{2})(1-\\sqrt{2})")).numerator, Polynomial(Rational(-1)));
    EXPECT_EQ(canonicalize(parse("\\sqrt{x^2+2x+1}")).numerator, *as_polynomial(parse("x+1")));
    EXPECT_EQ(canonicalize(parse("4^{\\frac{1}{2}}")).numerator, Polynomial(Rational(2)));
}

TEST(Canonical, OutOfScope)
{
    for (const char* text: {"\\sqrt{x}", "\\sqrt{-4}", "x^y", "2^{\\frac{1}{3}}", "\\frac{1}{0}"})
    {
        try
        {
            canonicalize(parse(text));
            ADD_FAILURE() << text;
        }
        catch (const MathError& err)
        {
            EXPECT_EQ(err.code(), Errc::NonRationalForm) << text;
        }
    }
}

TEST(Canonical, NeverHoldsZeroOrUnreducedCoefficients)
{
    oracle::Generator gen(7);
    for (int i = 0; i < 200; ++i)
    {
        CanonicalForm f = canonicalize(gen.tree(3).expr);
        for (const auto& [m, c]: f.numerator.terms())
        {
            EXPECT_NE(c, 0);
            EXPECT_EQ(gcd(num_of(c), den_of(c)), 1);
        }
    }
}

TEST(Canonical, AgreesWithFullExpansionOracle)
{
    oracle::Generator gen(99);
    for (int i = 0; i < 300; ++i)
    {
        oracle::Sample s = gen.tree(3);
        CanonicalForm f = canonicalize(s.expr);
        ASSERT_TRUE(f.is_polynomial());
        EXPECT_EQ(oracle::from_library(f.numerator), s.poly) << print(s.expr);
    }
}

TEST(Equiv, Examples)
{
    EXPECT_TRUE(is_equiv(parse("(x+1)^2"), parse("x^2+2x+1")));
    EXPECT_TRUE(is_equiv(parse("2x-2=0"), parse("x=1")));
    EXPECT_TRUE(is_equiv(parse("[x=1, x=-1]"), parse("[x=-1, x=1]")));
    EXPECT_TRUE(is_equiv(parse("3y-3=3"), parse("y-1=1")));
    EXPECT_TRUE(is_equiv(parse("\\frac{x^2}{x}"), parse("x")));
    EXPECT_FALSE(is_equiv(parse("x=1"), parse("x=-1")));
    EXPECT_FALSE(is_equiv(parse("x+1"), parse("x+1=0")));
    EXPECT_FALSE(is_equiv(parse("[x=1]"), parse("[x=1, x=2]")));
    EXPECT_TRUE(is_equiv(parse("y=2"), parse("[y=2]")));
    EXPECT_TRUE(is_equiv(parse("[x>2]"), parse("2x-4>0")));
    EXPECT_TRUE(is_equiv(parse("[x\\le -2]"), parse("-3x\\ge 6")));
    EXPECT_FALSE(is_equiv(parse("x>2"), parse("x\\ge 2")));
    EXPECT_FALSE(is_equiv(parse("x>2"), parse("x<2")));
    EXPECT_TRUE(is_equiv(parse("1<x<3"), parse("[1<x<3]")));
}

TEST(Equiv, SamplingFallback)
{
    EXPECT_TRUE(is_equiv(parse("\\sqrt{x}\\sqrt{x}"), parse("\\sqrt{x}^2")));
    EXPECT_TRUE(is_equiv(parse("2^x \\cdot 2^x"), parse("4^x")));
    EXPECT_FALSE(is_equiv(parse("2^x"), parse("3^x")));
    EXPECT_THROW(is_equiv(parse("x^{\\frac{1}{3}}"), parse("x")), MathError);
}

TEST(Equiv, ReflexiveSymmetricAndMatchesOracle)
{
    oracle::Generator gen(314);
    for (int i = 0; i < 200; ++i)
    {
        oracle::Sample a = gen.tree(2);
        oracle::Sample b = i % 2 == 0 ? oracle::Sample {parse(print(to_expr(canonicalize(a.expr)))), a.poly}
                                      : gen.tree(2);
        EXPECT_TRUE(is_equiv(a.expr, a.expr));
        bool ab = is_equiv(a.expr, b.expr);
        EXPECT_EQ(ab, is_equiv(b.expr, a.expr));
        EXPECT_EQ(ab, a.poly == b.poly) << print(a.expr) << " vs " << print(b.expr);
    }
}
