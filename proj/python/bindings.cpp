// SPDX-License-Identifier: Apache-2.0
#include <deli/canonical.hpp>
#include <deli/cas.hpp>
#include <deli/efg.hpp>
#include <deli/evaluate.hpp>
#include <deli/llm.hpp>
#include <deli/metrics.hpp>
#include <deli/orchestrator.hpp>
#include <deli/registry.hpp>
#include <deli/retrieval.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace deli;

namespace
{

// Python receives JSON records as dicts.
py::object to_python(const std::string& json_text)
{
    return py::module_::import("json").attr("loads")(json_text);
}

std::shared_ptr<llm::Backend> make_backend(const std::optional<std::string>& cassette,
                                           const std::optional<std::string>& rules)
{
    if (cassette && rules)
        throw std::invalid_argument("give either a cassette or a rules file, not both");
    if (cassette)
        return std::make_shared<llm::CassetteBackend>(llm::Cassette::load(*cassette), llm::CassetteMode::Replay);
    if (rules)
        return std::make_shared<llm::ScriptedBackend>(llm::ScriptedBackend::load_rules(*rules));
    throw std::invalid_argument("a cassette or a rules file is required");
}

std::shared_ptr<const retrieval::Corpus> corpus_of(const std::vector<efg::Problem>& problems)
{
    std::vector<retrieval::Entry> entries;
    for (const auto& p: problems)
        entries.push_back({p.id, p.problem, p.solution});
    if (entries.empty())
        return {};
    return std::make_shared<const retrieval::Corpus>(retrieval::Corpus::index(std::move(entries)));
}

EngineConfig config_of(int max_iterations, std::size_t top_k, const std::string& strategy, std::uint64_t seed)
{
    EngineConfig c;
    c.max_iterations = static_cast<std::size_t>(max_iterations < 0 ? 0 : max_iterations);
    c.top_k = top_k;
    if (strategy == "random")
        c.strategy = InitStrategy::Random;
    else if (strategy != "retrieval")
        throw std::invalid_argument("unknown strategy '" + strategy + "'");
    c.seed = seed;
    return c;
}

py::dict extracted_to_python(const metrics::ExtractedSolution& s)
{
    py::list exprs;
    for (const auto& e: s.expressions)
        exprs.append(print(e));
    py::dict d;
    d["expressions"] = exprs;
    d["final_answer"] = s.final_answer ? py::object(py::str(print(*s.final_answer))) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Symbolic interfaces, metrics and deliberation engine";

    static py::exception<MathError> math_error(m, "MathError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const MathError& e)
        {
            py::object err = py::handle(math_error)(py::str(std::string(errc_name(e.code())) + ": " + e.what()));
            err.attr("code") = std::string(errc_name(e.code()));
            PyErr_SetObject(math_error.ptr(), err.ptr());
        }
    });
    py::register_exception<GatewayError>(m, "GatewayError", PyExc_RuntimeError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

    py::class_<Expr>(m, "Expr")
        .def(py::init(&parse), py::arg("text"))
        .def("__str__", &print)
        .def("__repr__", [](const Expr& e) { return "Expr('" + print(e) + "')"; })
        .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
        .def("__hash__", [](const Expr& e) { return std::hash<std::string> {}(print(e)); })
        .def_property_readonly("free_symbols", &Expr::free_symbols);

    m.def("parse", &parse, py::arg("text"), "Parses LaTeX-style math into an expression.");
    m.def("is_equiv", py::overload_cast<const Expr&, const Expr&>(&is_equiv), py::arg("a"), py::arg("b"));
    m.def("is_equiv", [](const std::string& a, const std::string& b) { return is_equiv(parse(a), parse(b)); },
          py::arg("a"), py::arg("b"));

    py::module_ cas = m.def_submodule("cas", "The symbolic interfaces");
    cas.def("calculate", &cas::calculate);
    cas.def("substitute", &cas::substitute, py::arg("expr"), py::arg("conditions"));
    cas.def("solve_eq", &cas::solve_eq);
    cas.def("solve_ineq", &cas::solve_ineq);
    cas.def("solve_multi_eq", &cas::solve_multi_eq);
    cas.def("solve_multi_ineq", &cas::solve_multi_ineq);
    cas.def("partial_solve", &cas::partial_solve, py::arg("expr"), py::arg("unknown"));
    cas.def("expand", &cas::expand);
    cas.def("factor", &cas::factor);
    cas.def("collect", &cas::collect, py::arg("expr"), py::arg("x"));
    cas.def("complete_the_square", &cas::complete_the_square);

    m.def(
        "invoke",
        [](const std::string& action) {
            static const Registry registry = Registry::standard();
            ParsedSegment seg = parse_action(action.rfind("Action:", 0) == 0 ? action : "Action: " + action);
            if (!seg.action)
                throw std::invalid_argument("not an action: " + action);
            InvocationResult r = registry.invoke(*seg.action);
            py::dict d;
            d["ok"] = r.ok();
            d["output"] = r.feedback();
            d["error"] = r.error ? py::object(py::str(std::string(errc_name(*r.error)))) : py::none();
            return d;
        },
        py::arg("action"), "Runs one interface call such as 'solve_eq($2x=4$)' and returns its feedback.");
    m.def("interfaces", [] {
        std::vector<std::string> names;
        const Registry registry = Registry::standard();
        for (const auto& d: registry.descriptors())
            names.push_back(d.name);
        return names;
    });

    m.def(
        "extract", [](const std::string& text) { return extracted_to_python(metrics::extract(text)); },
        py::arg("text"));
    m.def(
        "exp_acc",
        [](const std::string& graph_json, const std::string& solution) {
            return metrics::exp_acc(efg::graph_from_json(graph_json), metrics::extract(solution));
        },
        py::arg("graph_json"), py::arg("solution"));
    m.def(
        "fail_where",
        [](const std::string& graph_json, const std::string& answer, const std::string& solution) {
            return std::string(metrics::fail_where_name(
                metrics::fail_where(efg::graph_from_json(graph_json), parse(answer), metrics::extract(solution))));
        },
        py::arg("graph_json"), py::arg("answer"), py::arg("solution"));
    m.def(
        "validate_graph",
        [](const std::string& graph_json) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v: efg::validate(efg::graph_from_json(graph_json)))
                out.emplace_back(std::string(efg::violation_name(v.kind)), v.message);
            return out;
        },
        py::arg("graph_json"));

    py::class_<retrieval::Corpus, std::shared_ptr<retrieval::Corpus>>(m, "Corpus")
        .def(py::init([](const std::vector<std::tuple<std::string, std::string, std::string>>& entries) {
                 std::vector<retrieval::Entry> es;
                 for (const auto& [id, problem, solution]: entries)
                     es.push_back({id, problem, solution});
                 return std::make_shared<retrieval::Corpus>(retrieval::Corpus::index(std::move(es)));
             }),
             py::arg("entries"))
        .def(
            "top_k",
            [](const retrieval::Corpus& c, const std::string& query, std::size_t k) {
                std::vector<std::pair<std::string, double>> out;
                for (const auto& h: retrieval::top_k(c, query, k))
                    out.emplace_back(h.entry->id, h.score);
                return out;
            },
            py::arg("query"), py::arg("k"));

    m.def(
        "solve",
        [](const std::string& problem, const std::string& mode, std::optional<std::string> cassette,
           std::optional<std::string> rules, std::optional<std::filesystem::path> corpus, int max_iterations,
           std::size_t top_k, const std::string& strategy, std::uint64_t seed) {
            std::vector<efg::Problem> exemplars;
            if (corpus)
                exemplars = efg::load_dataset(*corpus);
            Engine engine(make_backend(cassette, rules), Prompts::defaults(),
                          config_of(max_iterations, top_k, strategy, seed), corpus_of(exemplars));
            ProblemRun run;
            {
                py::gil_scoped_release release;
                run = run_problem(engine, problem, parse_mode(mode));
            }
            if (run.gateway_failure)
                throw GatewayError("Aborted", run.error, false);
            return to_python(run.trace.dump());
        },
        py::arg("problem"), py::arg("mode") = "deli", py::arg("cassette") = py::none(), py::arg("rules") = py::none(),
        py::arg("corpus") = py::none(), py::arg("max_iterations") = 3, py::arg("top_k") = 4,
        py::arg("strategy") = "retrieval", py::arg("seed") = 0,
        "Runs one problem against a recorded cassette or a rules file and returns the run record.");

    m.def(
        "evaluate",
        [](const std::filesystem::path& dataset, const std::string& mode, std::optional<std::string> cassette,
           std::optional<std::string> rules, std::optional<std::filesystem::path> out, int max_iterations,
           std::size_t top_k, const std::string& strategy, std::uint64_t seed, std::size_t jobs) {
            auto problems = efg::load_dataset(dataset);
            Engine engine(make_backend(cassette, rules), Prompts::defaults(),
                          config_of(max_iterations, top_k, strategy, seed), corpus_of(problems));
            Evaluation e;
            {
                py::gil_scoped_release release;
                e = evaluate(engine, problems, parse_mode(mode), jobs);
            }
            if (out)
                write_evaluation(e, *out, std::string(mode_name(parse_mode(mode))));
            py::dict d = to_python(metrics::report_json(e.report, mode)).cast<py::dict>();
            d["gateway_failures"] = e.gateway_failures;
            return d;
        },
        py::arg("dataset"), py::arg("mode") = "deli", py::arg("cassette") = py::none(), py::arg("rules") = py::none(),
        py::arg("out") = py::none(), py::arg("max_iterations") = 3, py::arg("top_k") = 4,
        py::arg("strategy") = "retrieval", py::arg("seed") = 0, py::arg("jobs") = 1,
        "Evaluates a dataset with leave-one-out exemplars and returns the metrics report.");
}
