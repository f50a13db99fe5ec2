#pragma once

#include <stdexcept>
#include <string>

namespace qpw {

// Stable numeric values: these are mirrored by qpw_status in the C header.
enum class ErrorCode : int {
    InvalidArgument = 1,
    OutOfRange = 2,
    NotSkewSymmetric = 3,
    Loop = 4,
    TwoCycle = 5,
    Disconnected = 6,
    BudgetExceeded = 7,
    SizeGuard = 8,
    Infeasible = 9,
    VerificationFailed = 10,
    NotFound = 11,
    Domain = 12,
    Internal = 13,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code) noexcept;

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace qpw
