#pragma once

// Language-neutral data model: qualified names, call edges, call graphs,
// program instances and split assignments, plus the canonical
// callgraph.json form every other module reads and writes.

#include "callwitness/error.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

enum class Language { python, javascript, java };

inline constexpr Language kAllLanguages[] = {Language::python, Language::javascript, Language::java};

std::string_view to_string(Language language) noexcept;
/// Throws Error{schema_violation} for anything but the three tags.
Language parse_language(std::string_view tag);
/// "Python", "JavaScript", "Java".
std::string_view display_name(Language language) noexcept;
/// File extension without the dot.
std::string_view source_extension(Language language) noexcept;

/// Member name of the synthetic caller for code outside any function.
inline constexpr std::string_view kToplevelMember = "<toplevel>";
/// Java constructor member name.
inline constexpr std::string_view kConstructorMember = "<init>";

/// Canonical identity of a function inside a single-file program.
///
/// Python and JavaScript names join every segment with '.', the first segment
/// being the module (file stem). Java names join the class path with '.' and
/// put the member after ':', optionally followed by a parenthesized
/// parameter-type list, e.g. "Outer.Inner:run(String,int)".
class QualifiedName {
public:
    QualifiedName(Language language, std::vector<std::string> segments,
                  std::optional<std::string> signature = std::nullopt);

    Language language() const noexcept { return language_; }
    const std::vector<std::string>& segments() const noexcept { return segments_; }
    const std::optional<std::string>& signature() const noexcept { return signature_; }
    const std::string& text() const noexcept { return text_; }
    const std::string& member() const noexcept { return segments_.back(); }

    bool is_toplevel() const noexcept { return member() == kToplevelMember; }
    QualifiedName without_signature() const;

    bool operator==(const QualifiedName& other) const noexcept {
        return language_ == other.language_ && text_ == other.text_;
    }
    std::strong_ordering operator<=>(const QualifiedName& other) const noexcept {
        if (auto c = language_ <=> other.language_; c != 0) return c;
        return text_ <=> other.text_;
    }

private:
    Language language_;
    std::vector<std::string> segments_;
    std::optional<std::string> signature_;
    std::string text_;
};

/// Parses canonical text; throws Error{malformed_name}.
QualifiedName parse_qualified_name(std::string_view text, Language language);

/// `module.<toplevel>` for python/javascript, `Class:<toplevel>` for java.
QualifiedName toplevel_name(Language language, std::string_view scope);

/// True for a segment that may appear in a qualified name.
bool is_valid_segment(std::string_view segment) noexcept;

struct CallEdge {
    QualifiedName caller;
    QualifiedName callee;

    CallEdge(QualifiedName caller_name, QualifiedName callee_name);

    bool operator==(const CallEdge&) const noexcept = default;
    std::strong_ordering operator<=>(const CallEdge& other) const noexcept {
        if (auto c = caller <=> other.caller; c != 0) return c;
        return callee <=> other.callee;
    }
};

using EdgeSet = std::set<CallEdge>;
using NameSet = std::set<QualifiedName>;

/// Edge set E over the inventory F of one program.
class CallGraph {
public:
    /// Validates the invariants; throws Error{schema_violation}.
    CallGraph(Language language, std::string program_id, EdgeSet edges, NameSet functions);

    Language language() const noexcept { return language_; }
    const std::string& program_id() const noexcept { return program_id_; }
    const EdgeSet& edges() const noexcept { return edges_; }
    const NameSet& functions() const noexcept { return functions_; }

    /// Distinct callers in canonical order.
    std::vector<QualifiedName> callers() const;
    /// Callees of one caller in canonical order.
    std::vector<QualifiedName> callees_of(const QualifiedName& caller) const;

    bool operator==(const CallGraph&) const = default;

private:
    Language language_;
    std::string program_id_;
    EdgeSet edges_;
    NameSet functions_;
};

/// Canonical callgraph.json bytes (schema_version 1, sorted, two-space indent, LF).
std::string serialize_callgraph(const CallGraph& graph);
/// Throws Error{schema_violation}.
CallGraph deserialize_callgraph(std::string_view data);

struct EdgeDiff {
    EdgeSet tp;
    EdgeSet fp;
    EdgeSet fn;
};

/// Throws Error{language_mismatch}.
EdgeDiff edge_diff(const CallGraph& predicted, const CallGraph& gold);
EdgeDiff edge_diff(const EdgeSet& predicted, const EdgeSet& gold);

/// Newline-delimited lines that contain something other than whitespace.
int count_loc(std::string_view source) noexcept;

struct ProgramInstance {
    std::string program_id;
    Language language;
    std::string source;
    std::string repo;
    int loc = 0;
    std::optional<CallGraph> ground_truth;

    /// Builds an instance with loc derived from the source.
    static ProgramInstance make(std::string program_id, Language language, std::string source,
                                std::string repo, std::optional<CallGraph> ground_truth = std::nullopt);
};

/// Module name used for qualified names of an instance: python and
/// javascript files are written as `<program_id>.<ext>`, so the module is
/// the program id.
std::string module_name_for(const ProgramInstance& instance);

enum class Split { train, test };
std::string_view to_string(Split split) noexcept;
Split parse_split(std::string_view tag);

struct SplitAssignment {
    std::string repo;
    Split split;

    bool operator==(const SplitAssignment&) const = default;
};

/// `<repo-short-name>_<4-digit index>`; the short name is the part after the
/// last '/', with characters outside [A-Za-z0-9_] replaced by '_'.
std::string make_program_id(std::string_view repo_slug, int index);

}  // namespace callwitness
