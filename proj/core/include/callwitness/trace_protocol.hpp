#pragma once

// Line protocol written by every tracer:
//   CALLWITNESS<TAB>1<TAB><language>
//   CALL<TAB><caller><TAB><callee>      (zero or more)
// UTF-8, LF-terminated lines.

#include "callwitness/schema.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace callwitness {

inline constexpr int kTraceProtocolVersion = 1;

std::string format_trace_header(Language language);
std::string format_trace_call(std::string_view caller, std::string_view callee);

struct ParsedTrace {
    std::optional<Language> language;
    /// Raw (caller, callee) texts in emission order.
    std::vector<std::pair<std::string, std::string>> calls;
    /// Empty when every line parsed; otherwise the first problem found.
    /// Parsing stops at that point and keeps the calls before it.
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

ParsedTrace parse_trace(std::string_view data);

}  // namespace callwitness
