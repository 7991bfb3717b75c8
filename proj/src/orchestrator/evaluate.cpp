// SPDX-License-Identifier: Apache-2.0
#include <deli/evaluate.hpp>

#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace deli
{

using json = nlohmann::ordered_json;

std::string_view mode_name(Mode m) noexcept
{
    switch (m)
    {
        case Mode::Deli: return "deli";
        case Mode::Cot: return "cot";
        case Mode::ToolLoop: return "tool-loop";
    }
    return "unknown";
}

Mode parse_mode(std::string_view text)
{
    for (Mode m: {Mode::Deli, Mode::Cot, Mode::ToolLoop})
        if (mode_name(m) == text)
            return m;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected deli, cot or tool-loop)");
}

ProblemRun run_problem(const Engine& engine, const std::string& problem, Mode mode)
{
    ProblemRun run;
    try
    {
        if (mode == Mode::Deli)
        {
            DeliberationState st = engine.run_deli(problem);
            run.trace = state_to_json(st);
            if (const Solution* s = st.final_solution())
                run.solution = *s;
        }
        else
        {
            Solution s = engine.run_baseline(problem, mode == Mode::Cot ? BaselineMode::Cot : BaselineMode::ToolLoop);
            run.trace = solution_to_json(s);
            run.solution = std::move(s);
        }
    }
    catch (const DeliberationAborted& e)
    {
        run.trace = state_to_json(e.state());
        run.error = e.what();
        run.gateway_failure = true;
    }
    catch (const GatewayError& e)
    {
        run.error = e.what();
        run.gateway_failure = true;
    }
    return run;
}

metrics::ProblemResult score(const efg::Problem& gold, const ProblemRun& run)
{
    metrics::ProblemResult r;
    r.id = gold.id;
    if (!run.solution)
    {
        r.note = run.error.empty() ? "no solution" : run.error;
        return r;
    }
    auto extracted = run.solution->extracted();
    Expr answer = parse(gold.answer);
    r.correct = metrics::answers_match(extracted.final_answer, answer);
    r.exp_acc = metrics::exp_acc(gold.graph, extracted);
    r.where = metrics::fail_where(gold.graph, answer, extracted);
    return r;
}

Evaluation evaluate(const Engine& engine, const std::vector<efg::Problem>& dataset, Mode mode, std::size_t jobs)
{
    Evaluation out;
    const std::size_t n = dataset.size();
    std::vector<ProblemRun> runs(n);
    std::atomic<std::size_t> next {0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++)
            runs[i] = run_problem(engine, dataset[i].problem, mode);
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < n; ++i)
    {
        auto result = score(dataset[i], runs[i]);
        json rec;
        rec["id"] = result.id;
        rec["correct"] = result.correct;
        rec["exp_acc"] = result.exp_acc;
        rec["fail_where"] = metrics::fail_where_name(result.where);
        rec["answer"] = runs[i].solution && runs[i].solution->answer ? json(print(*runs[i].solution->answer))
                                                                     : json(nullptr);
        rec["gold_answer"] = dataset[i].answer;
        if (!result.note.empty())
            rec["note"] = result.note;
        rec["run"] = runs[i].trace;
        out.gateway_failures += runs[i].gateway_failure ? 1 : 0;
        out.results.push_back(std::move(result));
        out.records.push_back(std::move(rec));
    }
    out.report = metrics::aggregate(out.results);
    return out;
}

void write_evaluation(const Evaluation& e, const std::filesystem::path& dir, const std::string& label)
{
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + (dir / name).string());
        out << text;
    };
    std::string records;
    for (const auto& r: e.records)
        records += r.dump() + "\n";
    write("records.jsonl", records);
    write("report.json", metrics::report_json(e.report, label) + "\n");
    write("report.txt", metrics::report_table(e.report, label));
}

} // namespace deli
