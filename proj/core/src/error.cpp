#include "callwitness/error.hpp"

namespace callwitness {

namespace {

std::string format_message(ErrorCode code, const std::string& message, int line) {
    std::string out{to_string(code)};
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    out += ": ";
    out += message;
    return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::malformed_name: return "malformed-name";
        case ErrorCode::schema_violation: return "schema-violation";
        case ErrorCode::language_mismatch: return "language-mismatch";
        case ErrorCode::unsupported_construct: return "unsupported-construct";
        case ErrorCode::missing_entry_point: return "missing-entry-point";
        case ErrorCode::toolchain_missing: return "toolchain-missing";
        case ErrorCode::compile_failure: return "compile-failure";
        case ErrorCode::io_error: return "io-error";
        case ErrorCode::missing_ground_truth: return "missing-ground-truth";
        case ErrorCode::empty_input: return "empty-input";
        case ErrorCode::degenerate_stratum: return "degenerate-stratum";
        case ErrorCode::client_error: return "client-error";
        case ErrorCode::not_compilable: return "not-compilable";
        case ErrorCode::network_error: return "network-error";
        case ErrorCode::auth_error: return "auth-error";
        case ErrorCode::rate_limited: return "rate-limited";
        case ErrorCode::invalid_argument: return "invalid-argument";
    }
    return "unknown";
}

bool is_infrastructure(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::toolchain_missing:
        case ErrorCode::io_error:
        case ErrorCode::network_error:
        case ErrorCode::auth_error:
        case ErrorCode::rate_limited:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(format_message(code, message, line)), code_(code), line_(line) {}

}  // namespace callwitness
