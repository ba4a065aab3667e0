#pragma once

#include "callwitness/schema.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

enum class FunctionKind {
    // javascript
    function_decl,
    arrow_const,
    class_method,
    class_constructor,
    // java
    static_method,
    instance_method,
    constructor,
};

std::string_view to_string(FunctionKind kind) noexcept;

struct LineSpan {
    int start_line = 0;
    int end_line = 0;
};

struct FunctionEntry {
    QualifiedName name;
    FunctionKind kind;
    LineSpan span;
    /// Declaring class path for java members, empty otherwise.
    std::string owner_class;
};

/// Functions of one file in source order.
struct FunctionInventory {
    std::vector<FunctionEntry> functions;

    NameSet names() const;
    const FunctionEntry* find(const QualifiedName& name) const;
};

/// Every injected byte sits between these markers, so removing the marked
/// regions recovers the original text exactly.
inline constexpr std::string_view kProbeOpen = "/*cw<*/";
inline constexpr std::string_view kProbeClose = "/*>cw*/";

struct InstrumentedSource {
    std::string text;
    FunctionInventory inventory;
    /// Lines injected ahead of the original first line.
    int prelude_lines = 0;
    /// Synthetic caller used for calls made outside any inventory function.
    QualifiedName toplevel;
};

/// Removes every marked probe region; the inverse of instrumentation.
std::string strip_probes(std::string_view instrumented);

bool contains_probes(std::string_view text) noexcept;

/// Text insertion at a byte offset of the original source. At equal offsets,
/// closers go before openers; deeper closers first, shallower openers first.
struct Insertion {
    size_t offset = 0;
    bool closer = false;
    int depth = 0;
    std::string text;
};

/// Applies insertions (each wrapped in probe markers) to `source`.
std::string apply_insertions(std::string_view source, std::vector<Insertion> insertions);

}  // namespace callwitness
