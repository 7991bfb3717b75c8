// SPDX-License-Identifier: Apache-2.0
// deli: solve, evaluate and validate from the command line.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 gateway error.

#include <deli/evaluate.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using json = nlohmann::ordered_json;

enum Exit
{
    Ok = 0,
    Usage = 1,
    Data = 2,
    Gateway = 3,
};

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunOptions
{
    std::string mode = "deli";
    std::string backend;
    std::string cassette;
    bool record = false;
    std::size_t max_iters = 3;
    std::size_t top_k = 4;
    std::string strategy = "retrieval";
    std::string corpus;
    std::string prompts;
    std::string out;
    std::size_t jobs = 1;
    std::uint64_t seed = 0;
    std::string model = "gpt-3.5-turbo";
};

void add_run_options(CLI::App* cmd, RunOptions& o)
{
    cmd->add_option("--mode", o.mode, "deli, cot or tool-loop")->check(CLI::IsMember({"deli", "cot", "tool-loop"}));
    cmd->add_option("--backend", o.backend, "scripted:CASSETTE, scripted, live or rules:RULES.json")->required();
    cmd->add_option("--cassette", o.cassette, "cassette file (replayed by scripted, recorded by live and rules)");
    cmd->add_flag("--record", o.record, "record into --cassette even if it exists");
    cmd->add_option("--max-iters", o.max_iters, "deliberation iterations M")->check(CLI::PositiveNumber);
    cmd->add_option("--top-k", o.top_k, "exemplars per prompt")->check(CLI::PositiveNumber);
    cmd->add_option("--strategy", o.strategy, "retrieval or random")->check(CLI::IsMember({"retrieval", "random"}));
    cmd->add_option("--corpus", o.corpus, "exemplar dataset (JSONL)");
    cmd->add_option("--prompts", o.prompts, "prompt template directory");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--jobs", o.jobs, "problems run in parallel")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for the random strategy");
    cmd->add_option("--model", o.model, "model identifier sent to the backend");
}

struct Backend
{
    std::shared_ptr<deli::llm::Backend> backend;
    std::shared_ptr<deli::llm::Cassette> recording; // saved after the run
    std::string cassette;
};

Backend make_backend(const RunOptions& o)
{
    using namespace deli::llm;
    Backend b;
    std::string kind = o.backend;
    std::string arg;
    if (auto colon = kind.find(':'); colon != std::string::npos)
    {
        arg = kind.substr(colon + 1);
        kind = kind.substr(0, colon);
    }
    b.cassette = o.cassette;
    if (kind == "scripted")
    {
        if (!arg.empty())
            b.cassette = arg;
        if (b.cassette.empty())
            throw UsageError("the scripted backend needs a cassette: --backend scripted:PATH or --cassette PATH");
        b.backend = std::make_shared<CassetteBackend>(Cassette::load(b.cassette), CassetteMode::Replay);
        return b;
    }
    std::shared_ptr<deli::llm::Backend> inner;
    if (kind == "live")
    {
        LiveConfig config = LiveConfig::from_env();
        config.model = o.model;
        if (config.api_key.empty())
            throw UsageError("the live backend needs DELI_API_KEY or OPENAI_API_KEY");
        inner = std::make_shared<LiveBackend>(config);
    }
    else if (kind == "rules")
    {
        if (arg.empty())
            throw UsageError("the rules backend needs a file: --backend rules:PATH");
        inner = std::make_shared<ScriptedBackend>(ScriptedBackend::load_rules(arg));
    }
    else
        throw UsageError("unknown backend '" + o.backend + "'");
    if (b.cassette.empty())
    {
        b.backend = inner;
        return b;
    }
    b.recording = std::make_shared<Cassette>();
    if (!o.record && std::filesystem::exists(b.cassette))
        b.recording = Cassette::load(b.cassette);
    b.backend = std::make_shared<CassetteBackend>(b.recording, CassetteMode::Record, inner);
    return b;
}

std::shared_ptr<const deli::retrieval::Corpus> make_corpus(const std::vector<deli::efg::Problem>& problems)
{
    std::vector<deli::retrieval::Entry> entries;
    for (const auto& p: problems)
        entries.push_back({p.id, p.problem, p.solution});
    if (entries.empty())
        return {};
    return std::make_shared<const deli::retrieval::Corpus>(deli::retrieval::Corpus::index(std::move(entries)));
}

deli::EngineConfig engine_config(const RunOptions& o)
{
    deli::EngineConfig c;
    c.max_iterations = o.max_iters;
    c.top_k = o.top_k;
    c.strategy = o.strategy == "random" ? deli::InitStrategy::Random : deli::InitStrategy::Retrieval;
    c.seed = o.seed;
    c.model = o.model;
    return c;
}

deli::Prompts load_prompts(const RunOptions& o)
{
    return o.prompts.empty() ? deli::Prompts::defaults() : deli::Prompts::load(o.prompts);
}

std::vector<deli::efg::Problem> load_checked(const std::string& path)
{
    auto problems = deli::efg::load_dataset(path);
    for (std::size_t i = 0; i < problems.size(); ++i)
    {
        try
        {
            (void)deli::parse(problems[i].answer);
        }
        catch (const deli::MathError& e)
        {
            throw DataError("records[" + std::to_string(i) + "].answer (" + problems[i].id + "): " + e.what());
        }
    }
    return problems;
}

void save_recording(const Backend& b)
{
    if (b.recording)
        b.recording->save(b.cassette);
}

void print_solution(std::ostream& out, const std::string& title, const deli::Solution& s)
{
    out << "== " << title << " (" << deli::solution_form_name(s.form) << ")\n" << s.text;
    if (s.text.empty() || s.text.back() != '\n')
        out << "\n";
    out << "-> answer: " << (s.answer ? deli::print(*s.answer) : std::string("(none)")) << "\n\n";
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cmd_solve(const RunOptions& o, std::string problem, const std::string& file, bool as_json)
{
    if (!file.empty())
        problem = read_text(file);
    if (problem.empty())
        throw UsageError("give the problem text or --file");
    std::shared_ptr<const deli::retrieval::Corpus> corpus;
    if (!o.corpus.empty())
        corpus = make_corpus(load_checked(o.corpus));
    if (o.strategy == "retrieval" && o.mode != "tool-loop" && !corpus)
        throw UsageError("the retrieval strategy needs --corpus (or use --strategy random)");
    Backend b = make_backend(o);
    deli::Engine engine(b.backend, load_prompts(o), engine_config(o), corpus);
    deli::Mode mode = deli::parse_mode(o.mode);
    deli::ProblemRun run = deli::run_problem(engine, problem, mode);
    save_recording(b);

    if (!o.out.empty())
    {
        std::filesystem::create_directories(o.out);
        std::ofstream(std::filesystem::path(o.out) / "solve.json") << run.trace.dump(2) << "\n";
    }
    if (as_json)
        std::cout << run.trace.dump(2) << "\n";
    else if (mode == deli::Mode::Deli && run.trace.contains("history"))
    {
        auto& t = run.trace;
        if (t["initial"].is_object())
            std::cout << "== initial solution\n" << t["initial"]["text"].get<std::string>() << "\n\n";
        std::size_t i = 0;
        for (const auto& it: t["history"])
        {
            ++i;
            std::cout << "== iteration " << i << ": tool deliberation\n" << it["tools"]["text"].get<std::string>() << "\n";
            std::cout << "== iteration " << i << ": chain-of-thought deliberation\n"
                      << it["cot"]["text"].get<std::string>() << "\n\n";
        }
        if (t["stop_reason"].is_string())
            std::cout << "stop reason: " << t["stop_reason"].get<std::string>() << "\n";
        std::cout << "final answer: " << (t["answer"].is_string() ? t["answer"].get<std::string>() : "(none)") << "\n";
    }
    else if (run.solution)
        print_solution(std::cout, std::string(deli::mode_name(mode)) + " solution", *run.solution);

    if (run.gateway_failure)
    {
        std::cerr << "deli: gateway error: " << run.error << "\n";
        return Gateway;
    }
    return Ok;
}

int cmd_evaluate(const RunOptions& o, const std::string& dataset_path)
{
    if (o.out.empty())
        throw UsageError("evaluate needs --out");
    auto dataset = load_checked(dataset_path);
    if (dataset.empty())
        throw DataError("the dataset " + dataset_path + " has no problems");
    for (const auto& p: dataset)
        if (auto v = deli::efg::validate(p.graph); !v.empty())
            throw DataError("problem " + p.id + ": invalid gold graph: " + v.front().message);
    auto corpus = make_corpus(o.corpus.empty() ? dataset : load_checked(o.corpus));
    Backend b = make_backend(o);
    deli::Engine engine(b.backend, load_prompts(o), engine_config(o), corpus);
    auto result = deli::evaluate(engine, dataset, deli::parse_mode(o.mode), o.jobs);
    save_recording(b);
    deli::write_evaluation(result, o.out, o.mode);
    std::cout << deli::metrics::report_table(result.report, o.mode);
    if (result.gateway_failures)
    {
        std::cerr << "deli: " << result.gateway_failures << " problem(s) failed with gateway errors\n";
        return Gateway;
    }
    return Ok;
}

int cmd_validate(const std::string& path)
{
    auto problems = deli::efg::load_dataset(path);
    bool clean = true;
    for (const auto& p: problems)
        for (const auto& v: deli::efg::validate(p.graph))
        {
            clean = false;
            std::cout << p.id << ": " << deli::efg::violation_name(v.kind) << ": " << v.message << "\n";
        }
    return clean ? Ok : Data;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"DELI: iterative deliberation for computation-intensive algebra problems"};
    app.require_subcommand(1);

    RunOptions solve_opts;
    std::string problem, problem_file;
    bool as_json = false;
    auto* solve = app.add_subcommand("solve", "solve one problem");
    add_run_options(solve, solve_opts);
    solve->add_option("problem", problem, "problem text");
    solve->add_option("--file", problem_file, "read the problem from a file");
    solve->add_flag("--json", as_json, "print the run record as JSON");

    RunOptions eval_opts;
    std::string eval_dataset;
    auto* evaluate = app.add_subcommand("evaluate", "run a dataset and write metrics");
    add_run_options(evaluate, eval_opts);
    evaluate->add_option("--dataset", eval_dataset, "dataset (JSONL)")->required();

    std::string validate_dataset;
    auto* validate = app.add_subcommand("validate", "check the expression flow graphs of a dataset");
    validate->add_option("--dataset,dataset", validate_dataset, "dataset (JSONL)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return Usage;
    }

    try
    {
        if (*solve)
            return cmd_solve(solve_opts, problem, problem_file, as_json);
        if (*evaluate)
            return cmd_evaluate(eval_opts, eval_dataset);
        if (validate_dataset.empty())
            throw UsageError("validate needs a dataset");
        return cmd_validate(validate_dataset);
    }
    catch (const UsageError& e)
    {
        std::cerr << "deli: " << e.what() << "\n";
        return Usage;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "deli: " << e.what() << "\n";
        return Usage;
    }
    catch (const deli::SchemaError& e)
    {
        std::cerr << "deli: data error: " << e.what() << "\n";
        return Data;
    }
    catch (const DataError& e)
    {
        std::cerr << "deli: data error: " << e.what() << "\n";
        return Data;
    }
    catch (const deli::GatewayError& e)
    {
        std::cerr << "deli: gateway error: " << e.what() << "\n";
        return Gateway;
    }
    catch (const std::exception& e)
    {
        std::cerr << "deli: " << e.what() << "\n";
        return Data;
    }
}
