#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flp {

enum class ErrorCode {
    ZeroNormal,
    DegenerateField,
    NotSlidingRegion,
    NoAdmissibleFocus,
    DeltaNotOne,
    EtaZero,
    NoReturn,
    DegenerateTangency,
    ConditionViolated,
    OutOfRange,
    DomainError,
    TheoremViolation,
    WindowNotFound,
    MalformedInput,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace flp
