// SPDX-License-Identifier: Apache-2.0
#include <deli/errors.hpp>

namespace deli
{

std::string_view errc_name(Errc code) noexcept
{
    switch (code)
    {
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnsupportedConstruct: return "UnsupportedConstruct";
        case Errc::NonRationalForm: return "NonRationalForm";
        case Errc::Indeterminate: return "Indeterminate";
        case Errc::NonNumeric: return "NonNumeric";
        case Errc::BadCondition: return "BadCondition";
        case Errc::UnsupportedDegree: return "UnsupportedDegree";
        case Errc::NotUnivariate: return "NotUnivariate";
        case Errc::Inconsistent: return "Inconsistent";
        case Errc::NonLinearSystem: return "NonLinearSystem";
        case Errc::SymbolAbsent: return "SymbolAbsent";
        case Errc::NonPolynomial: return "NonPolynomial";
        case Errc::NotQuadratic: return "NotQuadratic";
        case Errc::UnknownInterface: return "UnknownInterface";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::MalformedAction: return "MalformedAction";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::GatewayError: return "GatewayError";
    }
    return "Unknown";
}

SyntaxError::SyntaxError(const std::string& message, std::size_t offset):
    MathError(Errc::SyntaxError, message + " at offset " + std::to_string(offset)), offset_(offset)
{
}

SchemaError::SchemaError(std::string field, const std::string& message):
    std::runtime_error(field + ": " + message), field_(std::move(field))
{
}

GatewayError::GatewayError(std::string reason, const std::string& message, bool retriable):
    std::runtime_error(reason + ": " + message), reason_(std::move(reason)), retriable_(retriable)
{
}

} // namespace deli
