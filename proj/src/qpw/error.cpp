#include "qpw/error.hpp"

namespace qpw {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::NotSkewSymmetric: return "not_skew_symmetric";
    case ErrorCode::Loop: return "loop";
    case ErrorCode::TwoCycle: return "two_cycle";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::BudgetExceeded: return "budget_exceeded";
    case ErrorCode::SizeGuard: return "size_guard";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::VerificationFailed: return "verification_failed";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

} // namespace qpw
