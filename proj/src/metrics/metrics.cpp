// SPDX-License-Identifier: Apache-2.0
#include <deli/canonical.hpp>
#include <deli/metrics.hpp>
#include <deli/registry.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

namespace deli::metrics
{

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

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Parsed expressions of one math segment; a comma list yields its items.
std::vector<Expr> parse_segment(std::string text)
{
    text = trim(text);
    while (!text.empty() && (text.back() == '.' || text.back() == ','))
        text.pop_back();
    if (text.empty())
        return {};
    try
    {
        Expr e = parse(text);
        if (e.kind() == NodeKind::Set)
            return {e.args().begin(), e.args().end()};
        return {e};
    }
    catch (const MathError&)
    {
    }
    std::vector<Expr> out;
    auto parts = split_top_level(text);
    if (parts.size() < 2)
        return out;
    for (auto& part: parts)
    {
        try
        {
            out.push_back(parse(trim(part)));
        }
        catch (const MathError&)
        {
        }
    }
    return out;
}

// Contents of $..$, $$..$$, \(..\), \[..\] in order.
std::vector<std::string> math_segments(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size())
    {
        std::string_view open;
        std::string_view close;
        if (line.substr(i, 2) == "$$")
            open = close = "$$";
        else if (line[i] == '$')
            open = close = "$";
        else if (line.substr(i, 2) == "\\(")
            open = "\\(", close = "\\)";
        else if (line.substr(i, 2) == "\\[")
            open = "\\[", close = "\\]";
        if (open.empty())
        {
            ++i;
            continue;
        }
        auto end = line.find(close, i + open.size());
        if (end == std::string_view::npos)
            break;
        out.emplace_back(line.substr(i + open.size(), end - i - open.size()));
        i = end + close.size();
    }
    return out;
}

std::optional<std::size_t> answer_marker(const std::string& line, std::size_t& after)
{
    std::string l = lower(line);
    for (std::string_view marker: {"the answer is", "answer:", "final answer", "answer is"})
    {
        auto pos = l.find(marker);
        if (pos != std::string::npos)
        {
            after = pos + marker.size();
            return pos;
        }
    }
    return std::nullopt;
}

// Three or more letters in a row outside a LaTeX command read as a word.
bool has_word(std::string_view text)
{
    std::size_t run = 0;
    bool command = false;
    for (char c: text)
    {
        if (std::isalpha(static_cast<unsigned char>(c)))
        {
            if (!command && ++run >= 3)
                return true;
            continue;
        }
        command = c == '\\';
        run = 0;
    }
    return false;
}

bool matches(const Expr& a, const Expr& b)
{
    try
    {
        return is_equiv(a, b);
    }
    catch (const MathError&)
    {
        return false;
    }
}

} // namespace

ExtractedSolution extract(const std::string& text)
{
    ExtractedSolution out;
    out.raw = text;
    auto push = [&](const Expr& e) {
        if (out.expressions.empty() || !(out.expressions.back() == e))
            out.expressions.push_back(e);
    };

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
    {
        std::string t = trim(line);
        if (t.rfind("Output:", 0) == 0)
        {
            std::string payload = trim(t.substr(7));
            payload.erase(std::remove(payload.begin(), payload.end(), '$'), payload.end());
            if (payload.rfind("Error", 0) == 0)
                continue;
            if (payload.size() >= 2 && payload.front() == '[' && payload.back() == ']')
                payload = payload.substr(1, payload.size() - 2);
            for (const auto& e: parse_segment(payload))
                push(e);
            continue;
        }

        std::size_t after = 0;
        auto marker = answer_marker(t, after);
        for (const auto& seg: math_segments(t))
            for (const auto& e: parse_segment(seg))
                push(e);
        if (!marker)
            continue;

        std::string rest = t.substr(after);
        std::optional<Expr> answer;
        for (const auto& seg: math_segments(rest))
        {
            auto parsed = parse_segment(seg);
            if (!parsed.empty())
            {
                answer = parsed.back();
                break;
            }
        }
        if (!answer)
        {
            std::string bare = rest;
            bare.erase(std::remove(bare.begin(), bare.end(), '$'), bare.end());
            auto parsed = has_word(bare) ? std::vector<Expr> {} : parse_segment(bare);
            if (parsed.size() == 1)
                answer = parsed.front();
        }
        if (answer)
            out.final_answer = answer;
    }
    if (!out.final_answer && !out.expressions.empty())
        out.final_answer = out.expressions.back();
    return out;
}

ExpAccCounts exp_acc_counts(const efg::Graph& gold, const ExtractedSolution& pred)
{
    ExpAccCounts counts;
    std::set<std::string> credited;
    for (const auto& node: gold.nodes)
    {
        if (node.kind != efg::NodeKind::Expression)
            continue;
        ++counts.total;
        Expr g = node.expr();
        bool matched = std::any_of(pred.expressions.begin(), pred.expressions.end(),
                                   [&](const Expr& e) { return matches(e, g); });
        if (!matched)
            continue;
        credited.insert(node.id);
        for (const auto& a: efg::ancestors(gold, node.id))
            credited.insert(a);
    }
    if (counts.total == 0)
        throw EmptyGold();
    for (const auto& id: credited)
        if (gold.find(id)->kind == efg::NodeKind::Expression)
            ++counts.credited;
    return counts;
}

double exp_acc(const efg::Graph& gold, const ExtractedSolution& pred)
{
    return exp_acc_counts(gold, pred).fraction();
}

std::string_view fail_where_name(FailWhere f) noexcept
{
    switch (f)
    {
        case FailWhere::Correct: return "correct";
        case FailWhere::First: return "first";
        case FailWhere::Middle: return "middle";
        case FailWhere::Last: return "last";
    }
    return "unknown";
}

bool answers_match(const std::optional<Expr>& a, const std::optional<Expr>& b)
{
    return a && b && matches(*a, *b);
}

FailWhere fail_where(const efg::Graph& gold, const Expr& gold_answer, const ExtractedSolution& pred)
{
    if (answers_match(pred.final_answer, gold_answer))
        return FailWhere::Correct;
    if (pred.expressions.empty())
        return FailWhere::First;
    std::vector<Expr> gold_exprs;
    for (const auto& node: gold.nodes)
        if (node.kind == efg::NodeKind::Expression)
            gold_exprs.push_back(node.expr());
    const std::size_t n = pred.expressions.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Expr& e = pred.expressions[i];
        bool matched = std::any_of(gold_exprs.begin(), gold_exprs.end(), [&](const Expr& g) { return matches(e, g); });
        if (matched)
            continue;
        if (i == 0)
            return FailWhere::First;
        return i + 1 == n ? FailWhere::Last : FailWhere::Middle;
    }
    return FailWhere::Last;
}

MetricsReport aggregate(const std::vector<ProblemResult>& results)
{
    if (results.empty())
        throw EmptyDataset();
    MetricsReport r;
    r.problems = results.size();
    double acc_sum = 0;
    std::size_t first = 0, middle = 0, last = 0;
    for (const auto& p: results)
    {
        acc_sum += p.exp_acc;
        if (p.correct)
        {
            ++r.correct;
            continue;
        }
        switch (p.where)
        {
            case FailWhere::First: ++first; break;
            case FailWhere::Middle: ++middle; break;
            case FailWhere::Last:
            case FailWhere::Correct: ++last; break;
        }
    }
    const double n = static_cast<double>(r.problems);
    r.accuracy = static_cast<double>(r.correct) / n;
    r.exp_acc = acc_sum / n;
    r.fail_denominator = r.problems - r.correct;
    if (r.fail_denominator == 0)
    {
        r.fail_undefined = true;
        return r;
    }
    const double d = static_cast<double>(r.fail_denominator);
    r.fail_first = static_cast<double>(first) / d;
    r.fail_middle = static_cast<double>(middle) / d;
    r.fail_last = static_cast<double>(last) / d;
    return r;
}

std::string report_json(const MetricsReport& r, const std::string& label)
{
    nlohmann::ordered_json j;
    if (!label.empty())
        j["label"] = label;
    j["problems"] = r.problems;
    j["correct"] = r.correct;
    j["accuracy"] = r.accuracy;
    j["exp_acc"] = r.exp_acc;
    j["fail_at"] = {{"first", r.fail_first}, {"middle", r.fail_middle}, {"last", r.fail_last}};
    j["fail_at_denominator"] = r.fail_denominator;
    j["fail_at_undefined"] = r.fail_undefined;
    return j.dump(2);
}

std::string report_table(const MetricsReport& r, const std::string& label)
{
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
        return std::string(buf);
    };
    auto cell = [](const std::string& s, std::size_t width) {
        return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
    };
    std::string name = label.empty() ? "run" : label;
    std::size_t w = std::max<std::size_t>(name.size(), 6) + 2;
    std::string out;
    out += cell("Method", w) + cell("Acc.", 9) + cell("ExpAcc", 9) + cell("First", 9) + cell("Middle", 9) + "Last\n";
    out += cell(name, w) + cell(pct(r.accuracy), 9) + cell(pct(r.exp_acc), 9);
    if (r.fail_undefined)
        out += cell("-", 9) + cell("-", 9) + "-\n";
    else
        out += cell(pct(r.fail_first), 9) + cell(pct(r.fail_middle), 9) + pct(r.fail_last) + "\n";
    return out;
}

} // namespace deli::metrics
