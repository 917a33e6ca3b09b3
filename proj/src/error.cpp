#include "stcalc/error.hpp"

namespace stcalc {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DegenerateParams: return "DegenerateParams";
        case ErrorCode::DegenerateQ: return "DegenerateQ";
        case ErrorCode::ZeroFactor: return "ZeroFactor";
        case ErrorCode::ParamMismatch: return "ParamMismatch";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::NonConvergentSum: return "NonConvergentSum";
        case ErrorCode::NonConvergentIteration: return "NonConvergentIteration";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::SyntaxError: return "SyntaxError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + " [" + module + "]: " + message),
      code_(code),
      module_(std::move(module)) {}

namespace {

std::string describe(std::size_t position, const std::vector<std::string>& expected,
                     std::string_view found) {
    std::string msg = "at position " + std::to_string(position) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i != 0) msg += i + 1 == expected.size() ? " or " : ", ";
        msg += expected[i];
    }
    msg += found.empty() ? ", found end of input" : ", found '" + std::string(found) + "'";
    return msg;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected, std::string_view found)
    : Error(ErrorCode::SyntaxError, "cli", describe(position, expected, found)),
      position_(position),
      expected_(std::move(expected)) {}

}  // namespace stcalc
