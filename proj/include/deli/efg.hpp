// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/expr.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

/// Expression flow graphs: intermediate expressions as nodes, derivation
/// steps as (multi-source) edges, textual conditions as initial nodes.
namespace deli::efg
{

enum class NodeKind
{
    Expression,
    Condition,
};

struct Node
{
    std::string id;
    NodeKind kind = NodeKind::Expression;
    std::string content;              // LaTeX for expressions, prose for conditions
    std::optional<std::string> value; // computed result, if recorded

    /// Parsed content of an expression node.
    [[nodiscard]] Expr expr() const;

    bool operator==(const Node&) const = default;
};

struct Edge
{
    std::vector<std::string> sources;
    std::string target;
    std::string relation;

    bool operator==(const Edge&) const = default;
};

struct Graph
{
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::string final_node;

    [[nodiscard]] const Node* find(const std::string& id) const;

    bool operator==(const Graph&) const = default;
};

/// One dataset record.
struct Problem
{
    std::string id;
    std::string problem;
    std::string solution;
    std::string answer;
    Graph graph;

    bool operator==(const Problem&) const = default;
};

enum class ViolationKind
{
    Cycle,
    DanglingEdge,
    ConditionWithIncomingEdge,
    UnreachableNode,
    NonExpressionTarget,
    EmptySources,
    SelfReference,
    DuplicateId,
    UnknownFinalNode,
    InvalidContent,
};

std::string_view violation_name(ViolationKind k) noexcept;

struct Violation
{
    ViolationKind kind;
    std::vector<std::string> nodes; // sorted
    std::string message;
};

/// Every structural problem of `g`; empty means valid.
std::vector<Violation> validate(const Graph& g);

class UnknownNode : public std::invalid_argument
{
public:
    explicit UnknownNode(const std::string& id): std::invalid_argument("unknown node " + id) {}
};

/// Nodes with a directed path to `id`, excluding `id`.
std::set<std::string> ancestors(const Graph& g, const std::string& id);

// Graph documents. Errors are SchemaError with a dotted field path.
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g);
Graph load(const std::filesystem::path& path);
void save(const Graph& g, const std::filesystem::path& path);

// Datasets: one problem document per line.
Problem problem_from_json(const std::string& text);
std::string problem_to_json(const Problem& p);
std::vector<Problem> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::vector<Problem>& problems, const std::filesystem::path& path);

} // namespace deli::efg
