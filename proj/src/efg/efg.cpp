// SPDX-License-Identifier: Apache-2.0
#include <deli/efg.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace deli::efg
{

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view violation_name(ViolationKind k) noexcept
{
    switch (k)
    {
        case ViolationKind::Cycle: return "cycle";
        case ViolationKind::DanglingEdge: return "dangling-edge";
        case ViolationKind::ConditionWithIncomingEdge: return "condition-with-incoming-edge";
        case ViolationKind::UnreachableNode: return "unreachable-node";
        case ViolationKind::NonExpressionTarget: return "non-expression-target";
        case ViolationKind::EmptySources: return "empty-sources";
        case ViolationKind::SelfReference: return "self-reference";
        case ViolationKind::DuplicateId: return "duplicate-id";
        case ViolationKind::UnknownFinalNode: return "unknown-final-node";
        case ViolationKind::InvalidContent: return "invalid-content";
    }
    return "unknown";
}

Expr Node::expr() const
{
    return parse(content);
}

const Node* Graph::find(const std::string& id) const
{
    for (const auto& n: nodes)
        if (n.id == id)
            return &n;
    return nullptr;
}

namespace
{

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s: items)
        out += (out.empty() ? "" : ", ") + s;
    return out;
}

// Tarjan's strongly connected components over an adjacency list.
class Scc
{
public:
    explicit Scc(const std::vector<std::vector<std::size_t>>& adj): adj_(adj), index_(adj.size(), -1),
                                                                       low_(adj.size(), 0), on_stack_(adj.size())
    {
        for (std::size_t v = 0; v < adj.size(); ++v)
            if (index_[v] < 0)
                visit(v);
    }

    std::vector<std::vector<std::size_t>> components;

private:
    void visit(std::size_t v)
    {
        index_[v] = low_[v] = counter_++;
        stack_.push_back(v);
        on_stack_[v] = true;
        for (auto w: adj_[v])
        {
            if (index_[w] < 0)
            {
                visit(w);
                low_[v] = std::min(low_[v], low_[w]);
            }
            else if (on_stack_[w])
                low_[v] = std::min(low_[v], index_[w]);
        }
        if (low_[v] != index_[v])
            return;
        std::vector<std::size_t> component;
        std::size_t w;
        do
        {
            w = stack_.back();
            stack_.pop_back();
            on_stack_[w] = false;
            component.push_back(w);
        } while (w != v);
        components.push_back(std::move(component));
    }

    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<int> index_;
    std::vector<int> low_;
    std::vector<bool> on_stack_;
    std::vector<std::size_t> stack_;
    int counter_ = 0;
};

} // namespace

std::vector<Violation> validate(const Graph& g)
{
    std::vector<Violation> out;
    auto report = [&](ViolationKind k, std::vector<std::string> nodes, std::string message) {
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        out.push_back({k, std::move(nodes), std::move(message)});
    };

    std::map<std::string, std::size_t> index;
    for (const auto& n: g.nodes)
    {
        if (!index.emplace(n.id, index.size()).second)
            report(ViolationKind::DuplicateId, {n.id}, "node id " + n.id + " is used more than once");
        if (n.kind == NodeKind::Condition && n.content.empty())
            report(ViolationKind::InvalidContent, {n.id}, "condition node " + n.id + " has no text");
        if (n.kind == NodeKind::Expression)
        {
            try
            {
                (void)n.expr();
            }
            catch (const MathError& e)
            {
                report(ViolationKind::InvalidContent, {n.id},
                       "expression node " + n.id + " does not parse: " + e.what());
            }
        }
    }

    // arcs source -> target between known nodes
    std::vector<std::vector<std::size_t>> adj(index.size());
    std::vector<std::vector<std::size_t>> parents(index.size());
    for (const auto& e: g.edges)
    {
        if (e.sources.empty())
            report(ViolationKind::EmptySources, {e.target}, "an edge into " + e.target + " has no sources");
        std::vector<std::string> missing;
        for (const auto& s: e.sources)
            if (!index.count(s))
                missing.push_back(s);
        if (!index.count(e.target))
            missing.push_back(e.target);
        if (!missing.empty())
        {
            report(ViolationKind::DanglingEdge, missing, "an edge refers to unknown nodes " + join(missing));
            continue;
        }
        const Node* target = g.find(e.target);
        if (target->kind == NodeKind::Condition)
            report(ViolationKind::ConditionWithIncomingEdge, {e.target},
                   "condition node " + e.target + " has an incoming edge");
        for (const auto& s: e.sources)
        {
            if (s == e.target)
            {
                report(ViolationKind::SelfReference, {s}, "node " + s + " is derived from itself");
                continue;
            }
            adj[index[s]].push_back(index[e.target]);
            parents[index[e.target]].push_back(index[s]);
        }
    }

    std::vector<std::string> ids(index.size());
    for (const auto& [id, i]: index)
        ids[i] = id;

    Scc scc(adj);
    for (const auto& component: scc.components)
    {
        if (component.size() < 2)
            continue;
        std::vector<std::string> names;
        for (auto v: component)
            names.push_back(ids[v]);
        std::sort(names.begin(), names.end());
        report(ViolationKind::Cycle, names, "nodes " + join(names) + " form a cycle");
    }

    auto final_it = index.find(g.final_node);
    if (final_it == index.end())
    {
        report(ViolationKind::UnknownFinalNode, {g.final_node},
               "final node " + (g.final_node.empty() ? std::string("(empty)") : g.final_node) + " does not exist");
        return out;
    }
    if (g.find(g.final_node)->kind != NodeKind::Expression)
        report(ViolationKind::NonExpressionTarget, {g.final_node},
               "final node " + g.final_node + " must be an expression");

    std::vector<bool> seen(index.size());
    std::vector<std::size_t> todo {final_it->second};
    seen[final_it->second] = true;
    while (!todo.empty())
    {
        auto v = todo.back();
        todo.pop_back();
        for (auto p: parents[v])
            if (!seen[p])
            {
                seen[p] = true;
                todo.push_back(p);
            }
    }
    std::vector<std::string> unreachable;
    for (std::size_t v = 0; v < seen.size(); ++v)
        if (!seen[v])
            unreachable.push_back(ids[v]);
    if (!unreachable.empty())
    {
        std::sort(unreachable.begin(), unreachable.end());
        report(ViolationKind::UnreachableNode, unreachable,
               "nodes " + join(unreachable) + " do not lead to the final node " + g.final_node);
    }
    return out;
}

std::set<std::string> ancestors(const Graph& g, const std::string& id)
{
    if (!g.find(id))
        throw UnknownNode(id);
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& e: g.edges)
        for (const auto& s: e.sources)
            parents[e.target].push_back(s);
    std::set<std::string> out;
    std::vector<std::string> todo {id};
    while (!todo.empty())
    {
        std::string v = todo.back();
        todo.pop_back();
        for (const auto& p: parents[v])
            if (p != id && out.insert(p).second)
                todo.push_back(p);
    }
    return out;
}

namespace
{

const json& field(const json& obj, const std::string& name, const std::string& path)
{
    if (!obj.is_object())
        throw SchemaError(path.empty() ? "(root)" : path, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end())
        throw SchemaError(path.empty() ? name : path + "." + name, "missing field");
    return *it;
}

std::string string_field(const json& obj, const std::string& name, const std::string& path)
{
    const json& v = field(obj, name, path);
    if (!v.is_string())
        throw SchemaError(path.empty() ? name : path + "." + name, "expected a string");
    return v.get<std::string>();
}

Graph read_graph(const json& doc, const std::string& path)
{
    auto at = [&](const std::string& name) { return path.empty() ? name : path + "." + name; };
    Graph g;
    const json& nodes = field(doc, "nodes", path);
    if (!nodes.is_array())
        throw SchemaError(at("nodes"), "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        std::string p = at("nodes") + "[" + std::to_string(i) + "]";
        Node n;
        n.id = string_field(nodes[i], "id", p);
        std::string kind = string_field(nodes[i], "kind", p);
        if (kind == "expression")
            n.kind = NodeKind::Expression;
        else if (kind == "condition")
            n.kind = NodeKind::Condition;
        else
            throw SchemaError(p + ".kind", "node " + n.id + " has kind '" + kind +
                                               "', expected 'expression' or 'condition'");
        n.content = string_field(nodes[i], "content", p);
        if (n.kind == NodeKind::Expression)
        {
            try
            {
                (void)n.expr();
            }
            catch (const MathError& e)
            {
                throw SchemaError(p + ".content", "node " + n.id + " content does not parse: " + e.what());
            }
        }
        else if (n.content.empty())
            throw SchemaError(p + ".content", "condition node " + n.id + " has no text");
        if (auto it = nodes[i].find("value"); it != nodes[i].end() && !it->is_null())
        {
            if (!it->is_string())
                throw SchemaError(p + ".value", "expected a string");
            n.value = it->get<std::string>();
        }
        g.nodes.push_back(std::move(n));
    }
    const json& edges = field(doc, "edges", path);
    if (!edges.is_array())
        throw SchemaError(at("edges"), "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        std::string p = at("edges") + "[" + std::to_string(i) + "]";
        Edge e;
        const json& sources = field(edges[i], "sources", p);
        if (!sources.is_array())
            throw SchemaError(p + ".sources", "expected an array of node ids");
        for (std::size_t k = 0; k < sources.size(); ++k)
        {
            if (!sources[k].is_string())
                throw SchemaError(p + ".sources[" + std::to_string(k) + "]", "expected a node id");
            e.sources.push_back(sources[k].get<std::string>());
        }
        e.target = string_field(edges[i], "target", p);
        if (edges[i].contains("relation"))
            e.relation = string_field(edges[i], "relation", p);
        g.edges.push_back(std::move(e));
    }
    g.final_node = string_field(doc, "final_node", path);
    return g;
}

ordered_json write_graph(const Graph& g)
{
    ordered_json nodes = ordered_json::array();
    for (const auto& n: g.nodes)
    {
        ordered_json j;
        j["id"] = n.id;
        j["kind"] = n.kind == NodeKind::Expression ? "expression" : "condition";
        j["content"] = n.content;
        if (n.value)
            j["value"] = *n.value;
        nodes.push_back(std::move(j));
    }
    ordered_json edges = ordered_json::array();
    for (const auto& e: g.edges)
    {
        ordered_json j;
        j["sources"] = e.sources;
        j["target"] = e.target;
        j["relation"] = e.relation;
        edges.push_back(std::move(j));
    }
    ordered_json out;
    out["nodes"] = std::move(nodes);
    out["edges"] = std::move(edges);
    out["final_node"] = g.final_node;
    return out;
}

json parse_document(const std::string& text, const std::string& path)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw SchemaError(path.empty() ? "(root)" : path, std::string("not valid JSON: ") + e.what());
    }
}

Problem read_problem(const json& doc, const std::string& path)
{
    Problem p;
    p.id = string_field(doc, "id", path);
    p.problem = string_field(doc, "problem", path);
    p.solution = string_field(doc, "solution", path);
    p.answer = string_field(doc, "answer", path);
    p.graph = read_graph(field(doc, "graph", path), path.empty() ? "graph" : path + ".graph");
    return p;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("(file)", "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace

Graph graph_from_json(const std::string& text)
{
    return read_graph(parse_document(text, ""), "");
}

std::string graph_to_json(const Graph& g)
{
    return write_graph(g).dump();
}

Graph load(const std::filesystem::path& path)
{
    return graph_from_json(read_file(path));
}

void save(const Graph& g, const std::filesystem::path& path)
{
    write_file(path, graph_to_json(g) + "\n");
}

Problem problem_from_json(const std::string& text)
{
    return read_problem(parse_document(text, ""), "");
}

std::string problem_to_json(const Problem& p)
{
    ordered_json j;
    j["id"] = p.id;
    j["problem"] = p.problem;
    j["solution"] = p.solution;
    j["answer"] = p.answer;
    j["graph"] = write_graph(p.graph);
    return j.dump();
}

std::vector<Problem> load_dataset(const std::filesystem::path& path)
{
    std::istringstream in(read_file(path));
    std::vector<Problem> out;
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line))
    {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::string p = "records[" + std::to_string(record++) + "]";
        out.push_back(read_problem(parse_document(line, p), p));
    }
    return out;
}

void save_dataset(const std::vector<Problem>& problems, const std::filesystem::path& path)
{
    std::string text;
    for (const auto& p: problems)
        text += problem_to_json(p) + "\n";
    write_file(path, text);
}

} // namespace deli::efg
