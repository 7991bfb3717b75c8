// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/errors.hpp>
#include <deli/expr.hpp>
#include <deli/llm.hpp>
#include <deli/metrics.hpp>
#include <deli/registry.hpp>
#include <deli/retrieval.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deli
{

/// Prompt templates. Placeholders are {name} tokens; anything else in braces
/// (LaTeX groups) is left alone.
struct Prompts
{
    std::string init;          // {exemplars} {problem}
    std::string init_exemplar; // {problem} {solution}
    std::string tools;         // {interfaces} {problem} {trial}
    std::string tool_loop;     // {interfaces} {problem}
    std::string cot;           // {problem} {solution} {verification}
    std::string think;         // {thought}
    std::vector<std::string> interfaces; // documented in tool prompts; empty means all

    /// The templates compiled into the library.
    static Prompts defaults();
    /// Reads <dir>/<template>.txt and interfaces.txt; missing files keep the defaults.
    static Prompts load(const std::filesystem::path& dir);
};

/// Replaces each {key} with its value in one pass.
std::string render_template(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values);

// ---------------------------------------------------------------- solutions

enum class SolutionForm
{
    NaturalLanguage,
    ToolTranscript,
};

std::string_view solution_form_name(SolutionForm f) noexcept;

struct ToolStep
{
    Action action;
    InvocationResult result;
};

struct Solution
{
    SolutionForm form = SolutionForm::NaturalLanguage;
    std::string text;            // NL text, or the transcript as shown to the model
    std::vector<ToolStep> steps; // transcript form only
    std::optional<Expr> answer;

    /// Input for the step-level metrics.
    [[nodiscard]] metrics::ExtractedSolution extracted() const;
};

/// What one model segment of the tool loop asks for.
struct ParsedSegment
{
    std::optional<Action> action;      // malformed when nothing was recognized
    std::optional<std::string> answer; // text after "Answer:"
    std::string consumed;              // the segment up to the end of the recognized line
};

/// Finds the first "Action: name(args)" or "Answer: ..." line.
ParsedSegment parse_action(std::string_view segment);

// ---------------------------------------------------------------- deliberation

enum class InitStrategy
{
    Retrieval,
    Random,
};

enum class StopReason
{
    AnswersConsistent,
    Converged,
    MaxIterations,
};

std::string_view stop_reason_name(StopReason r) noexcept;

struct Iteration
{
    Solution tools; // s_t
    Solution cot;   // s_n
};

struct DeliberationState
{
    std::string problem;
    std::vector<retrieval::Entry> exemplars;
    std::size_t iteration = 0;
    std::size_t max_iterations = 3;
    std::optional<Solution> initial;
    std::vector<Iteration> history;
    std::optional<Solution> pending_tools; // s_t of an interrupted iteration
    std::optional<StopReason> stop_reason;
    std::size_t conversations = 0; // think sub-calls excluded
    std::string error;

    /// The answer of the last tool transcript.
    [[nodiscard]] std::optional<Expr> answer() const;
    [[nodiscard]] const Solution* final_solution() const;
};

/// The tool loop ran out of actions; the transcript so far has no answer.
class ActionBudgetExceeded : public std::runtime_error
{
public:
    ActionBudgetExceeded(std::size_t cap, Solution transcript);
    [[nodiscard]] const Solution& transcript() const noexcept { return transcript_; }

private:
    Solution transcript_;
};

/// A gateway failure during run_deli, with everything completed so far.
class DeliberationAborted : public GatewayError
{
public:
    DeliberationAborted(const GatewayError& cause, DeliberationState state);
    [[nodiscard]] const DeliberationState& state() const noexcept { return state_; }

private:
    DeliberationState state_;
};

struct EngineConfig
{
    std::size_t max_iterations = 3;
    InitStrategy strategy = InitStrategy::Retrieval;
    std::size_t top_k = 4;
    std::size_t action_cap = 15;
    std::uint64_t seed = 0;
    std::string model = "gpt-3.5-turbo";
    bool exclude_self = true; // leave-one-out: never retrieve the problem itself
};

enum class BaselineMode
{
    Cot,
    ToolLoop,
};

/// Exemplar lookup: the k best entries for a query.
using Retriever = std::function<std::vector<retrieval::Entry>(const std::string& query, std::size_t k)>;

/// Shareable across threads; each call keeps its own state.
class Engine
{
public:
    Engine(std::shared_ptr<llm::Backend> backend, Prompts prompts, EngineConfig config,
           std::shared_ptr<const retrieval::Corpus> corpus = {});
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    void set_retriever(Retriever retriever) { retriever_ = std::move(retriever); }
    [[nodiscard]] const EngineConfig& config() const noexcept { return config_; }
    [[nodiscard]] const Registry& registry() const noexcept { return registry_; }

    [[nodiscard]] std::vector<retrieval::Entry> select_exemplars(const std::string& problem,
                                                                 InitStrategy strategy) const;

    [[nodiscard]] Solution init_solution(const std::string& problem,
                                         const std::vector<retrieval::Entry>& exemplars) const;
    [[nodiscard]] Solution init_solution(const std::string& problem) const;

    /// Tool deliberation over a trial solution; without a trial this is the
    /// plain tool loop.
    [[nodiscard]] Solution deliberate_tools(const std::string& problem, const Solution* trial) const;

    [[nodiscard]] Solution deliberate_cot(const std::string& problem, const Solution& given,
                                          const Solution& verification) const;

    [[nodiscard]] DeliberationState run_deli(const std::string& problem) const;

    [[nodiscard]] Solution run_baseline(const std::string& problem, BaselineMode mode) const;

    // Prompt text, exposed for inspection.
    [[nodiscard]] std::string init_prompt(const std::string& problem,
                                          const std::vector<retrieval::Entry>& exemplars) const;
    [[nodiscard]] std::string tools_prompt(const std::string& problem, const Solution* trial) const;
    [[nodiscard]] std::string cot_prompt(const std::string& problem, const Solution& given,
                                         const Solution& verification) const;

private:
    [[nodiscard]] std::string ask(const std::string& prompt, std::vector<std::string> stop = {}) const;

    std::shared_ptr<llm::Backend> backend_;
    Prompts prompts_;
    EngineConfig config_;
    std::shared_ptr<const retrieval::Corpus> corpus_;
    Retriever retriever_;
    Registry registry_;
    std::string interface_docs_;
};

// ---------------------------------------------------------------- records

nlohmann::ordered_json solution_to_json(const Solution& s);
/// The full per-problem record: exemplars, every iteration and the stop reason.
nlohmann::ordered_json state_to_json(const DeliberationState& s);

} // namespace deli
