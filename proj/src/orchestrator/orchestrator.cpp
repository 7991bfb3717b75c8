// SPDX-License-Identifier: Apache-2.0
#include <deli/orchestrator.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace deli
{

namespace detail
{
const std::map<std::string, std::string>& embedded_prompts();
}

namespace
{

using json = nlohmann::ordered_json;

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string rtrim(std::string_view s)
{
    auto e = s.find_last_not_of(" \t\r\n");
    return e == std::string_view::npos ? std::string() : std::string(s.substr(0, e + 1));
}

std::vector<std::string> name_list(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        line = trim(line);
        if (!line.empty() && line[0] != '#')
            out.push_back(line);
    }
    return out;
}

Prompts from_map(const std::map<std::string, std::string>& files, Prompts base)
{
    auto take = [&](const char* name, std::string& slot) {
        if (auto it = files.find(name); it != files.end())
            slot = it->second;
    };
    take("init", base.init);
    take("init_exemplar", base.init_exemplar);
    take("tools", base.tools);
    take("tool_loop", base.tool_loop);
    take("cot", base.cot);
    take("think", base.think);
    if (auto it = files.find("interfaces"); it != files.end())
        base.interfaces = name_list(it->second);
    return base;
}

Action malformed(std::string raw, std::size_t begin, std::size_t end, std::string problem)
{
    Action a;
    a.raw = std::move(raw);
    a.begin = begin;
    a.end = end;
    a.malformed = true;
    a.problem = std::move(problem);
    return a;
}

// `text` follows "Action:"; `offset` is its position in the segment.
Action parse_call(std::string_view text, std::size_t offset, std::size_t line_begin)
{
    std::size_t i = 0;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
        ++i;
    std::string name;
    while (i < text.size())
    {
        char c = text[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            name += c;
        else if (c == '\\' && i + 1 < text.size() && text[i + 1] == '_')
            ; // LaTeX-escaped underscore, as in solve\_eq
        else
            break;
        ++i;
    }
    const std::size_t line_end = offset + text.size();
    std::string raw = "Action:" + std::string(text);
    if (name.empty())
        return malformed(trim(raw), line_begin, line_end, "missing interface name after \"Action:\"");
    while (i < text.size() && text[i] == ' ')
        ++i;
    if (i >= text.size() || text[i] != '(')
        return malformed(trim(raw), line_begin, line_end, "expected '(' after " + name);
    const std::size_t open = i;
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t j = open; j < text.size(); ++j)
    {
        if (text[j] == '(')
            ++depth;
        else if (text[j] == ')' && --depth == 0)
        {
            close = j;
            break;
        }
    }
    if (close == std::string_view::npos)
        return malformed(trim(raw), line_begin, line_end, "unbalanced parentheses in the call to " + name);

    Action a;
    a.name = name;
    a.argument_text = std::string(text.substr(open + 1, close - open - 1));
    if (!trim(a.argument_text).empty())
        for (auto& arg: split_top_level(a.argument_text))
            a.args.push_back(trim(arg));
    a.raw = "Action: " + trim(text.substr(0, close + 1));
    a.begin = line_begin;
    a.end = offset + close + 1;
    return a;
}

bool same_text(const Solution& a, const Solution& b)
{
    return llm::normalize_whitespace(a.text) == llm::normalize_whitespace(b.text);
}

std::optional<std::string> printed(const std::optional<Expr>& e)
{
    if (!e)
        return std::nullopt;
    return print(*e);
}

// what() is "reason: message"
std::string without_reason(const GatewayError& e)
{
    std::string what = e.what();
    std::string prefix = e.reason() + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

} // namespace

// ---------------------------------------------------------------- prompts

Prompts Prompts::defaults()
{
    return from_map(detail::embedded_prompts(), Prompts {});
}

Prompts Prompts::load(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir))
        throw std::invalid_argument("prompt directory not found: " + dir.string());
    std::map<std::string, std::string> files;
    for (const char* name: {"init", "init_exemplar", "tools", "tool_loop", "cot", "think", "interfaces"})
    {
        std::ifstream in(dir / (std::string(name) + ".txt"), std::ios::binary);
        if (!in)
            continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        files[name] = buf.str();
    }
    return from_map(files, defaults());
}

std::string render_template(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values)
{
    std::string out;
    std::size_t i = 0;
    while (i < text.size())
    {
        if (text[i] == '{')
        {
            auto close = text.find('}', i + 1);
            if (close != std::string_view::npos)
            {
                std::string_view key = text.substr(i + 1, close - i - 1);
                auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == key; });
                if (it != values.end())
                {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += text[i++];
    }
    return out;
}

// ---------------------------------------------------------------- solutions

std::string_view solution_form_name(SolutionForm f) noexcept
{
    return f == SolutionForm::NaturalLanguage ? "natural-language" : "tool-transcript";
}

std::string_view stop_reason_name(StopReason r) noexcept
{
    switch (r)
    {
        case StopReason::AnswersConsistent: return "answers-consistent";
        case StopReason::Converged: return "converged";
        case StopReason::MaxIterations: return "max-iterations";
    }
    return "unknown";
}

metrics::ExtractedSolution Solution::extracted() const
{
    auto e = metrics::extract(text);
    e.final_answer = answer;
    return e;
}

ParsedSegment parse_action(std::string_view segment)
{
    ParsedSegment out;
    std::size_t pos = 0;
    while (pos < segment.size())
    {
        std::size_t eol = segment.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = segment.size();
        std::string_view line = segment.substr(pos, eol - pos);
        std::size_t lead = line.find_first_not_of(" \t");
        if (lead != std::string_view::npos)
        {
            std::string_view body = line.substr(lead);
            if (body.rfind("Answer:", 0) == 0)
            {
                out.answer = trim(body.substr(7));
                out.consumed = std::string(segment.substr(0, eol));
                return out;
            }
            if (body.rfind("Action:", 0) == 0)
            {
                out.action = parse_call(body.substr(7), pos + lead + 7, pos + lead);
                out.consumed = std::string(segment.substr(0, eol));
                return out;
            }
        }
        pos = eol + 1;
    }
    out.action = malformed(trim(segment), 0, segment.size(),
                           "expected a line \"Action: name(arguments)\" or \"Answer: ...\"");
    out.consumed = std::string(segment);
    return out;
}

// ---------------------------------------------------------------- state

std::optional<Expr> DeliberationState::answer() const
{
    const Solution* s = final_solution();
    return s ? s->answer : std::nullopt;
}

const Solution* DeliberationState::final_solution() const
{
    return history.empty() ? nullptr : &history.back().tools;
}

ActionBudgetExceeded::ActionBudgetExceeded(std::size_t cap, Solution transcript):
    std::runtime_error("the tool loop asked for more than " + std::to_string(cap) + " actions"),
    transcript_(std::move(transcript))
{
}

DeliberationAborted::DeliberationAborted(const GatewayError& cause, DeliberationState state):
    GatewayError(cause.reason(), without_reason(cause), cause.retriable()), state_(std::move(state))
{
}

// ---------------------------------------------------------------- engine

Engine::Engine(std::shared_ptr<llm::Backend> backend, Prompts prompts, EngineConfig config,
               std::shared_ptr<const retrieval::Corpus> corpus):
    backend_(std::move(backend)), prompts_(std::move(prompts)), config_(std::move(config)), corpus_(std::move(corpus))
{
    if (!backend_)
        throw std::invalid_argument("the engine needs a backend");
    if (config_.max_iterations < 1)
        throw std::invalid_argument("max_iterations must be at least 1");
    if (config_.top_k < 1)
        throw std::invalid_argument("top_k must be at least 1");
    registry_ = Registry::standard([this](const std::string& thought) {
        return trim(ask(render_template(prompts_.think, {{"thought", thought}})));
    });
    interface_docs_ = registry_.render_docs(prompts_.interfaces);
    if (corpus_)
    {
        retriever_ = [corpus = corpus_, exclude = config_.exclude_self](const std::string& query, std::size_t k) {
            std::vector<retrieval::Entry> out;
            const std::string self = llm::normalize_whitespace(query);
            for (const auto& hit: retrieval::top_k(*corpus, query, exclude ? k + 1 : k))
            {
                if (exclude && llm::normalize_whitespace(hit.entry->problem) == self)
                    continue;
                if (out.size() < k)
                    out.push_back(*hit.entry);
            }
            return out;
        };
    }
}

std::string Engine::ask(const std::string& prompt, std::vector<std::string> stop) const
{
    llm::ChatRequest request;
    request.messages.push_back({"user", prompt});
    request.stop = std::move(stop);
    request.model = config_.model;
    return backend_->complete(request);
}

std::vector<retrieval::Entry> Engine::select_exemplars(const std::string& problem, InitStrategy strategy) const
{
    if (strategy == InitStrategy::Retrieval)
    {
        if (!retriever_)
            throw std::invalid_argument("the retrieval strategy needs a corpus");
        return retriever_(problem, config_.top_k);
    }
    if (!corpus_)
        return {};
    // Seeded by the problem text too, so the draw does not depend on run order.
    std::uint64_t mix = std::stoull(retrieval::sha256_hex(problem).substr(0, 16), nullptr, 16);
    std::mt19937_64 rng(config_.seed ^ mix);
    std::vector<std::size_t> pool;
    const std::string self = llm::normalize_whitespace(problem);
    for (std::size_t i = 0; i < corpus_->size(); ++i)
        if (!config_.exclude_self || llm::normalize_whitespace(corpus_->entries()[i].problem) != self)
            pool.push_back(i);
    std::vector<retrieval::Entry> out;
    for (std::size_t i = 0; i < pool.size() && out.size() < config_.top_k; ++i)
    {
        std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
        out.push_back(corpus_->entries()[pool[i]]);
    }
    return out;
}

std::string Engine::init_prompt(const std::string& problem, const std::vector<retrieval::Entry>& exemplars) const
{
    std::string shots;
    for (const auto& e: exemplars)
        shots += render_template(prompts_.init_exemplar, {{"problem", trim(e.problem)}, {"solution", trim(e.solution)}});
    return render_template(prompts_.init, {{"exemplars", shots}, {"problem", trim(problem)}});
}

std::string Engine::tools_prompt(const std::string& problem, const Solution* trial) const
{
    if (!trial)
        return render_template(prompts_.tool_loop, {{"interfaces", interface_docs_}, {"problem", trim(problem)}});
    return render_template(prompts_.tools,
                           {{"interfaces", interface_docs_}, {"problem", trim(problem)}, {"trial", trim(trial->text)}});
}

std::string Engine::cot_prompt(const std::string& problem, const Solution& given, const Solution& verification) const
{
    return render_template(prompts_.cot, {{"problem", trim(problem)},
                                          {"solution", trim(given.text)},
                                          {"verification", trim(verification.text)}});
}

Solution Engine::init_solution(const std::string& problem, const std::vector<retrieval::Entry>& exemplars) const
{
    Solution s;
    s.text = trim(ask(init_prompt(problem, exemplars)));
    s.answer = metrics::extract(s.text).final_answer;
    return s;
}

Solution Engine::init_solution(const std::string& problem) const
{
    return init_solution(problem, select_exemplars(problem, config_.strategy));
}

Solution Engine::deliberate_tools(const std::string& problem, const Solution* trial) const
{
    if (trial && trial->form != SolutionForm::NaturalLanguage)
        throw std::invalid_argument("the trial of a tool deliberation must be a natural-language solution");
    const std::string prompt = tools_prompt(problem, trial);
    Solution s;
    s.form = SolutionForm::ToolTranscript;
    std::optional<Expr> last_value;
    std::size_t actions = 0;
    for (;;)
    {
        ParsedSegment parsed = parse_action(ask(prompt + s.text, {"Output:"}));
        if (parsed.answer)
        {
            s.text += rtrim(parsed.consumed) + "\n";
            auto stated = metrics::extract("Answer: " + *parsed.answer).final_answer;
            s.answer = stated ? stated : last_value;
            return s;
        }
        if (++actions > config_.action_cap)
            throw ActionBudgetExceeded(config_.action_cap, std::move(s));
        InvocationResult result = registry_.invoke(*parsed.action);
        if (result.ok() && result.value)
            last_value = result.value;
        s.text += rtrim(parsed.consumed) + "\nOutput: " + result.feedback() + "\n";
        s.steps.push_back({std::move(*parsed.action), std::move(result)});
    }
}

Solution Engine::deliberate_cot(const std::string& problem, const Solution& given, const Solution& verification) const
{
    if (verification.form != SolutionForm::ToolTranscript)
        throw std::invalid_argument("the verification of a chain-of-thought deliberation must be a tool transcript");
    Solution s;
    s.text = trim(ask(cot_prompt(problem, given, verification)));
    s.answer = metrics::extract(s.text).final_answer;
    return s;
}

DeliberationState Engine::run_deli(const std::string& problem) const
{
    DeliberationState st;
    st.problem = problem;
    st.max_iterations = config_.max_iterations;
    st.exemplars = select_exemplars(problem, config_.strategy);
    try
    {
        ++st.conversations;
        st.initial = init_solution(problem, st.exemplars);
        for (std::size_t i = 1; i <= st.max_iterations; ++i)
        {
            const Solution& given = st.history.empty() ? *st.initial : st.history.back().cot;
            ++st.conversations;
            Solution s_t;
            try
            {
                s_t = deliberate_tools(problem, &given);
            }
            catch (const ActionBudgetExceeded& e)
            {
                s_t = e.transcript();
            }
            st.pending_tools = s_t;
            ++st.conversations;
            Solution s_n = deliberate_cot(problem, given, s_t);
            st.pending_tools.reset();
            st.history.push_back({std::move(s_t), std::move(s_n)});
            st.iteration = i;

            const Iteration& now = st.history.back();
            if (metrics::answers_match(now.tools.answer, now.cot.answer))
                st.stop_reason = StopReason::AnswersConsistent;
            else if (i > 1 && same_text(now.tools, st.history[i - 2].tools) &&
                     same_text(now.cot, st.history[i - 2].cot))
                st.stop_reason = StopReason::Converged;
            else if (i == st.max_iterations)
                st.stop_reason = StopReason::MaxIterations;
            if (st.stop_reason)
                break;
        }
    }
    catch (const GatewayError& e)
    {
        st.error = e.what();
        throw DeliberationAborted(e, std::move(st));
    }
    return st;
}

Solution Engine::run_baseline(const std::string& problem, BaselineMode mode) const
{
    if (mode == BaselineMode::Cot)
        return init_solution(problem);
    try
    {
        return deliberate_tools(problem, nullptr);
    }
    catch (const ActionBudgetExceeded& e)
    {
        return e.transcript();
    }
}

// ---------------------------------------------------------------- records

json solution_to_json(const Solution& s)
{
    json j;
    j["form"] = solution_form_name(s.form);
    j["answer"] = printed(s.answer) ? json(*printed(s.answer)) : json(nullptr);
    j["text"] = s.text;
    if (s.form == SolutionForm::ToolTranscript)
    {
        json steps = json::array();
        for (const auto& step: s.steps)
        {
            json k;
            k["action"] = step.action.raw;
            k["name"] = step.action.name;
            k["args"] = step.action.args;
            k["ok"] = step.result.ok();
            k["output"] = step.result.feedback();
            steps.push_back(std::move(k));
        }
        j["steps"] = std::move(steps);
    }
    return j;
}

json state_to_json(const DeliberationState& s)
{
    json j;
    j["problem"] = s.problem;
    json ids = json::array();
    for (const auto& e: s.exemplars)
        ids.push_back(e.id);
    j["exemplars"] = std::move(ids);
    j["max_iterations"] = s.max_iterations;
    j["iterations"] = s.iteration;
    j["stop_reason"] = s.stop_reason ? json(stop_reason_name(*s.stop_reason)) : json(nullptr);
    auto answer = printed(s.answer());
    j["answer"] = answer ? json(*answer) : json(nullptr);
    j["conversations"] = s.conversations;
    j["initial"] = s.initial ? solution_to_json(*s.initial) : json(nullptr);
    json history = json::array();
    for (const auto& it: s.history)
        history.push_back({{"tools", solution_to_json(it.tools)}, {"cot", solution_to_json(it.cot)}});
    j["history"] = std::move(history);
    if (s.pending_tools)
        j["pending_tools"] = solution_to_json(*s.pending_tools);
    if (!s.error.empty())
        j["error"] = s.error;
    return j;
}

} // namespace deli
