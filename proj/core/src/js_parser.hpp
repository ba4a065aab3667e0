#pragma once

#include "callwitness/instrumented_source.hpp"

#include <string_view>
#include <vector>

namespace callwitness::js {

struct ParsedFunction {
    FunctionEntry entry;
    size_t begin = 0;
    bool is_async = false;
    bool concise = false;     // arrow with an expression body
    bool use_strict = false;  // body opens with a "use strict" directive
    size_t body_open = 0;     // just past '{', or start of the concise expression
    size_t body_close = 0;    // offset of the closing '}', or end of the concise expression
    int depth = 0;
};

struct AwaitSite {
    size_t begin = 0;        // the `await` keyword
    size_t after_keyword = 0;
    size_t operand_end = 0;
    int depth = 0;
};

struct ParseResult {
    std::vector<ParsedFunction> functions;  // source order
    std::vector<AwaitSite> awaits;
    size_t prelude_offset = 0;
    bool program_use_strict = false;
};

/// Throws Error{unsupported_construct} with a line number.
ParseResult parse(std::string_view source, std::string_view module_name);

}  // namespace callwitness::js
