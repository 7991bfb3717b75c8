// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/efg.hpp>
#include <deli/expr.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace deli::metrics
{

struct ExtractedSolution
{
    std::vector<Expr> expressions; // textual order, consecutive duplicates removed
    std::optional<Expr> final_answer;
    std::string raw;
};

/// Pulls math out of a generated solution: $...$, $$...$$, \(...\), \[...\]
/// segments, "Output:" lines of tool transcripts and answer lines
/// ("The answer is ...", "Answer: ..."). Unparseable pieces are dropped.
ExtractedSolution extract(const std::string& text);

class EmptyGold : public std::invalid_argument
{
public:
    EmptyGold(): std::invalid_argument("the gold graph has no expression nodes") {}
};

class EmptyDataset : public std::invalid_argument
{
public:
    EmptyDataset(): std::invalid_argument("cannot aggregate an empty set of results") {}
};

struct ExpAccCounts
{
    std::size_t credited = 0;
    std::size_t total = 0;

    [[nodiscard]] double fraction() const { return static_cast<double>(credited) / static_cast<double>(total); }
};

/// Gold expression nodes matched by some predicted expression, closed under
/// ancestry. Condition nodes count on neither side.
ExpAccCounts exp_acc_counts(const efg::Graph& gold, const ExtractedSolution& pred);
double exp_acc(const efg::Graph& gold, const ExtractedSolution& pred);

enum class FailWhere
{
    Correct,
    First,
    Middle,
    Last,
};

std::string_view fail_where_name(FailWhere f) noexcept;

FailWhere fail_where(const efg::Graph& gold, const Expr& gold_answer, const ExtractedSolution& pred);

/// Answer equivalence used for accuracy; false when either side is absent
/// or equivalence cannot be decided.
bool answers_match(const std::optional<Expr>& a, const std::optional<Expr>& b);

struct ProblemResult
{
    std::string id;
    bool correct = false;
    double exp_acc = 0;
    FailWhere where = FailWhere::First;
    std::string note; // error text for problems that failed to run
};

struct MetricsReport
{
    std::size_t problems = 0;
    std::size_t correct = 0;
    double accuracy = 0;
    double exp_acc = 0;
    double fail_first = 0;
    double fail_middle = 0;
    double fail_last = 0;
    std::size_t fail_denominator = 0; // incorrect problems
    bool fail_undefined = false;      // no incorrect problems, fractions reported as 0
};

MetricsReport aggregate(const std::vector<ProblemResult>& results);

/// Structured report, stable key order.
std::string report_json(const MetricsReport& r, const std::string& label = "");
/// Plain-text table with the columns Acc., ExpAcc, Fail@where first/middle/last.
std::string report_table(const MetricsReport& r, const std::string& label = "");

} // namespace deli::metrics
