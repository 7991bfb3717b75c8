// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/errors.hpp>
#include <deli/expr.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace deli
{

enum class Category
{
    NumericalComputation,
    EquationSolving,
    ExpressionTransformation,
    Thinking,
};

std::string_view category_name(Category c) noexcept;

enum class ArgRole
{
    Expression, // one math expression or relation
    List,       // one or more expressions; takes every remaining argument
    Symbol,
    Text,       // free text, commas included
};

struct ArgSpec
{
    std::string name;
    ArgRole role = ArgRole::Expression;
};

struct InterfaceDescriptor
{
    std::string name;
    std::vector<ArgSpec> args;
    std::string output;
    std::string description;
    std::string example_call;   // e.g. expand($(x+1)^2$)
    std::string example_output; // feedback text the call produces
    Category category = Category::ExpressionTransformation;

    /// "name(args) -> output: description. e.g. call -> output"
    [[nodiscard]] std::string render() const;
};

/// One model-emitted invocation.
struct Action
{
    std::string name;
    std::vector<std::string> args; // split at top-level commas, verbatim
    std::string argument_text;     // everything between the outer parentheses
    std::string raw;               // the whole action text
    std::size_t begin = 0;         // span in the model output
    std::size_t end = 0;
    bool malformed = false;
    std::string problem; // why it is malformed
};

struct InvocationResult
{
    std::optional<Expr> value;
    std::optional<std::string> text; // think output
    std::optional<Errc> error;
    std::string message;

    [[nodiscard]] bool ok() const { return !error.has_value(); }
    /// The text fed back after "Output:".
    [[nodiscard]] std::string feedback() const;

    static InvocationResult success(Expr e);
    static InvocationResult success(std::string text);
    static InvocationResult failure(Errc code, std::string message);
};

/// Splits at commas outside (), {}, [] and \{ \}.
std::vector<std::string> split_top_level(std::string_view text);

/// Routes a thought to a language model and returns its conclusion.
using ThinkFn = std::function<std::string(const std::string&)>;

class Registry
{
public:
    /// The twelve standard interfaces. Without `think`, invoking think yields
    /// a GatewayError feedback.
    static Registry standard(ThinkFn think = {});

    [[nodiscard]] const std::vector<InterfaceDescriptor>& descriptors() const { return descriptors_; }
    [[nodiscard]] const InterfaceDescriptor* find(std::string_view name) const;

    /// Never throws for malformed or failing actions; see InvocationResult.
    [[nodiscard]] InvocationResult invoke(const Action& action) const;

    /// Direct think call; GatewayError propagates.
    [[nodiscard]] std::string think(const std::string& thought) const;

    /// One rendered descriptor per line, optionally restricted to `names`.
    [[nodiscard]] std::string render_docs(const std::vector<std::string>& names = {}) const;

private:
    std::vector<InterfaceDescriptor> descriptors_;
    ThinkFn think_;
};

} // namespace deli
