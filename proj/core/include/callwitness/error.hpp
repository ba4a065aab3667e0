#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace callwitness {

enum class ErrorCode {
    malformed_name,
    schema_violation,
    language_mismatch,
    unsupported_construct,
    missing_entry_point,
    toolchain_missing,
    compile_failure,
    io_error,
    missing_ground_truth,
    empty_input,
    degenerate_stratum,
    client_error,
    not_compilable,
    network_error,
    auth_error,
    rate_limited,
    invalid_argument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Infrastructure errors abort a batch; everything else is a verdict on the input.
bool is_infrastructure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, int line = 0);

    ErrorCode code() const noexcept { return code_; }
    /// 1-based source line for parser errors, 0 when not applicable.
    int line() const noexcept { return line_; }

private:
    ErrorCode code_;
    int line_;
};

}  // namespace callwitness
