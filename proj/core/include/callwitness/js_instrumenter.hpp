#pragma once

#include "callwitness/instrumented_source.hpp"

#include <string_view>

namespace callwitness {

/// Every function declaration, bound function/arrow expression, class or
/// object-literal method and class constructor, named `module.[Scope.]name`.
/// Throws Error{unsupported_construct} with the offending line.
FunctionInventory parse_js_subset(std::string_view source, std::string_view module_name);

/// Wraps every inventory body in an enter/exit probe around a shadow call
/// stack and prepends a one-line prelude that writes trace lines to the file
/// named by CALLWITNESS_TRACE_OUT.
InstrumentedSource instrument_js(std::string_view source, std::string_view module_name);

}  // namespace callwitness
