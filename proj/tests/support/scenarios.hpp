// SPDX-License-Identifier: Apache-2.0
// Scripted language models shared by the orchestrator tests and the acceptance suite.
#pragma once

#include <deli/efg.hpp>
#include <deli/llm.hpp>
#include <deli/orchestrator.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace deli::testing
{

inline std::filesystem::path source_dir()
{
    return DELI_SOURCE_DIR;
}

inline std::filesystem::path demo_dir()
{
    return source_dir() / "data" / "demo";
}

inline std::vector<efg::Problem> demo_dataset()
{
    return efg::load_dataset(demo_dir() / "dataset.jsonl");
}

inline std::shared_ptr<llm::ScriptedBackend> worked_backend()
{
    return std::make_shared<llm::ScriptedBackend>(llm::ScriptedBackend::load_rules(demo_dir() / "rules.json"));
}

enum class PromptKind
{
    Init,
    Tools,
    ToolLoop,
    Cot,
    Think,
};

/// Tells the prompt templates apart by their fixed wording.
inline PromptKind prompt_kind(const std::string& prompt)
{
    if (prompt.rfind("Carry out the following reasoning step", 0) == 0)
        return PromptKind::Think;
    if (prompt.rfind("You are a helpful assistant", 0) == 0)
        return PromptKind::Init;
    if (prompt.rfind("You have access to both", 0) == 0)
        return PromptKind::Cot;
    if (prompt.rfind("Rewrite the trial solution", 0) == 0)
        return PromptKind::Tools;
    return PromptKind::ToolLoop;
}

/// A model given as a function of the prompt, with a request log.
class FnBackend : public llm::Backend
{
public:
    using Fn = std::function<std::string(PromptKind, const std::string&)>;
    explicit FnBackend(Fn fn): fn_(std::move(fn)) {}

    std::string complete(const llm::ChatRequest& request) override
    {
        const std::string& prompt = request.messages.back().content;
        {
            std::lock_guard lock(mutex_);
            requests_.push_back(request);
        }
        return llm::apply_stop(fn_(prompt_kind(prompt), prompt), request.stop);
    }

    std::vector<llm::ChatRequest> requests() const
    {
        std::lock_guard lock(mutex_);
        return requests_;
    }

private:
    Fn fn_;
    mutable std::mutex mutex_;
    std::vector<llm::ChatRequest> requests_;
};

/// Conversations in a request log: think calls are skipped and a request
/// that extends the previous prompt continues its conversation.
inline std::size_t count_conversations(const std::vector<llm::ChatRequest>& requests)
{
    std::size_t n = 0;
    std::string previous;
    for (const auto& r: requests)
    {
        const std::string& prompt = r.messages.back().content;
        if (prompt_kind(prompt) == PromptKind::Think)
            continue;
        bool continues = !previous.empty() && prompt.size() > previous.size() && prompt.rfind(previous, 0) == 0;
        if (!continues)
            ++n;
        previous = prompt;
    }
    return n;
}

/// Tool pass answers y=2 and the chain-of-thought pass keeps y=3, with the
/// same wording every time: the solutions converge at the second iteration.
inline std::shared_ptr<FnBackend> converging_backend()
{
    return std::make_shared<FnBackend>([](PromptKind kind, const std::string& prompt) -> std::string {
        switch (kind)
        {
            case PromptKind::Init: return "Guessing gives $y = 3$ . The answer is $y = 3$";
            case PromptKind::Tools:
            case PromptKind::ToolLoop:
                if (prompt.find("\nOutput:", prompt.rfind("\nQuestion:")) != std::string::npos)
                    return "Answer: $y=2$";
                return "Action: solve_eq($3y-3=3$)\n";
            case PromptKind::Cot: return "Still $y = 3$ . The answer is $y = 3$";
            case PromptKind::Think: return "nothing";
        }
        return {};
    });
}

/// The solutions never settle: every chain-of-thought pass bumps an attempt
/// counter and every tool pass answers y = 10 + the counter of its trial.
inline std::shared_ptr<FnBackend> disagreeing_backend()
{
    // The template exemplars never say "attempt", so the last mention is
    // the trial or the given solution.
    auto attempt = [](const std::string& prompt) {
        auto pos = prompt.rfind("attempt ");
        return pos == std::string::npos ? 0 : std::stoi(prompt.substr(pos + 8));
    };
    return std::make_shared<FnBackend>([attempt](PromptKind kind, const std::string& prompt) -> std::string {
        switch (kind)
        {
            case PromptKind::Init: return "This is attempt 0 . The answer is $y = 0$";
            case PromptKind::Tools: return "Answer: $y=" + std::to_string(10 + attempt(prompt)) + "$";
            case PromptKind::Cot:
                return "This is attempt " + std::to_string(attempt(prompt) + 1) + " . The answer is $y = 0$";
            default: return "Answer: $y=0$";
        }
    });
}

} // namespace deli::testing
