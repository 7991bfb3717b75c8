// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace deli
{

/// Error codes raised by the expression core and the algebra interfaces.
/// The names are surfaced verbatim in interface feedback, so keep them stable.
enum class Errc
{
    SyntaxError,
    UnsupportedConstruct,
    NonRationalForm,
    Indeterminate,
    NonNumeric,
    BadCondition,
    UnsupportedDegree,
    NotUnivariate,
    Inconsistent,
    NonLinearSystem,
    SymbolAbsent,
    NonPolynomial,
    NotQuadratic,
    UnknownInterface,
    ArityMismatch,
    MalformedAction,
    InvalidArgument,
    GatewayError,
};

std::string_view errc_name(Errc code) noexcept;

class MathError : public std::runtime_error
{
public:
    MathError(Errc code, const std::string& message): std::runtime_error(message), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

class SyntaxError : public MathError
{
public:
    SyntaxError(const std::string& message, std::size_t offset);

    /// Byte offset into the parsed text where the problem was detected.
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed dataset, graph, or cassette documents.
class SchemaError : public std::runtime_error
{
public:
    SchemaError(std::string field, const std::string& message);

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Failure talking to a language model backend. `reason` is a stable tag
/// such as "UnscriptedRequest", "Transport" or "HttpStatus".
class GatewayError : public std::runtime_error
{
public:
    GatewayError(std::string reason, const std::string& message, bool retriable);

    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }
    [[nodiscard]] bool retriable() const noexcept { return retriable_; }

private:
    std::string reason_;
    bool retriable_;
};

} // namespace deli
