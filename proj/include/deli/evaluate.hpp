// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/efg.hpp>
#include <deli/llm.hpp>
#include <deli/metrics.hpp>
#include <deli/orchestrator.hpp>

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace deli
{

enum class Mode
{
    Deli,
    Cot,
    ToolLoop,
};

std::string_view mode_name(Mode m) noexcept;
/// "deli", "cot" or "tool-loop".
Mode parse_mode(std::string_view text);

/// The outcome of one problem under one mode.
struct ProblemRun
{
    std::optional<Solution> solution; // the scored solution; absent when the run failed
    nlohmann::ordered_json trace;     // state record (deli) or solution record
    std::string error;
    bool gateway_failure = false;
};

/// Runs `mode` on one problem. Gateway failures are caught and reported.
ProblemRun run_problem(const Engine& engine, const std::string& problem, Mode mode);

/// Scores a run against the gold problem.
metrics::ProblemResult score(const efg::Problem& gold, const ProblemRun& run);

struct Evaluation
{
    std::vector<metrics::ProblemResult> results; // dataset order
    std::vector<nlohmann::ordered_json> records;
    metrics::MetricsReport report;
    std::size_t gateway_failures = 0;
};

/// Runs every problem with up to `jobs` threads; results keep dataset order.
Evaluation evaluate(const Engine& engine, const std::vector<efg::Problem>& dataset, Mode mode, std::size_t jobs = 1);

/// Writes records.jsonl, report.json and report.txt into `dir`.
void write_evaluation(const Evaluation& e, const std::filesystem::path& dir, const std::string& label);

} // namespace deli
