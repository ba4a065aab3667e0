#pragma once

#include "callwitness/instrumented_source.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

struct JavaMethodInventory {
    /// Methods and constructors with bodies, in source order. Names carry the
    /// erased parameter-type signature, e.g. `Outer.Inner:run(String,int)`.
    FunctionInventory methods;
    std::string package_name;
    /// Class path (dot-separated, without package) declaring `main`.
    std::string main_class;
    /// Name to hand to `java`: package-qualified, nested classes joined by '$'.
    std::string main_binary_name;
    /// The public top-level class, which fixes the file name; may be empty.
    std::string public_class;
    std::vector<std::string> imports;
};

/// Throws Error{unsupported_construct} (line-numbered) or
/// Error{missing_entry_point}.
JavaMethodInventory parse_java_subset(std::string_view source);

/// Injects an entry probe into every inventory body (after an explicit
/// this()/super() call in constructors) and appends the CallwitnessTracer
/// helper class to the compilation unit.
InstrumentedSource instrument_java(std::string_view source);

/// Name of the appended helper class.
inline constexpr std::string_view kJavaTracerClass = "CallwitnessTracer";

}  // namespace callwitness
