#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stcalc {

enum class ErrorCode {
    DegenerateParams,
    DegenerateQ,
    ZeroFactor,
    ParamMismatch,
    OutsideDomain,
    DomainError,
    Unsupported,
    NonConvergentSum,
    NonConvergentIteration,
    PoleHit,
    SyntaxError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every library failure is reported through this type. `module()` names
/// the module that raised it so callers can surface it verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
    std::string module_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, std::vector<std::string> expected, std::string_view found);

    std::size_t position() const noexcept { return position_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

}  // namespace stcalc
