#pragma once

// Python programs are never parsed in-process: the inventory and the
// harness compilability check run small ast-based scripts under the
// configured interpreter.

#include "callwitness/instrumented_source.hpp"

#include <filesystem>
#include <string_view>

namespace callwitness {

/// Every def (including methods and nested defs) as `module.[Scope.]name`;
/// lambdas are not part of the inventory. Throws Error{not_compilable} for a
/// syntax error and Error{toolchain_missing} if `python` is unusable.
FunctionInventory python_inventory(std::string_view source, std::string_view module_name,
                                   const std::filesystem::path& python, const std::filesystem::path& scratch_dir,
                                   double timeout_s = 30.0);

/// Parse-only check plus a standard-library-only import check. Throws
/// Error{not_compilable} with the interpreter's diagnostic.
void python_check_harness(std::string_view source, const std::filesystem::path& python,
                          const std::filesystem::path& scratch_dir, double timeout_s = 30.0);

}  // namespace callwitness
