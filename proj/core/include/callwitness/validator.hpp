#pragma once

#include "callwitness/executor.hpp"
#include "callwitness/schema.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace callwitness {

enum class FailureReason { execution_error, nondeterministic, insufficient_edges, schema_invalid };

std::string_view to_string(FailureReason reason) noexcept;

inline constexpr int kValidationRuns = 3;
inline constexpr int kMinCrossFunctionEdges = 2;

struct AcceptanceReport {
    std::string program_id;
    Language language = Language::python;
    bool accepted = false;
    std::optional<CallGraph> ground_truth;
    std::vector<FailureReason> failures;
    std::vector<TraceRun> runs;
    /// First diagnostic explaining a rejection (compiler output, crash tail).
    std::string detail;
};

/// Edges whose caller is a real function rather than the synthetic top level.
int count_cross_function_edges(const EdgeSet& edges);

/// Three independent runs; checks short-circuit in the order execution,
/// determinism, edge count, schema. Infrastructure errors propagate.
/// Instrumentation errors (unsupported construct, missing entry point)
/// propagate as well: nothing ran.
AcceptanceReport validate(const ProgramInstance& instance, const ExecConfig& config);

/// Canonical report.json (no timings, so reruns give identical bytes).
std::string serialize_report(const AcceptanceReport& report);

struct ValidationOutputs {
    std::filesystem::path report;
    std::optional<std::filesystem::path> callgraph;
};

/// Writes `<stem>callgraph.json` (accepted only) and `<stem>report.json` into
/// `dir`; pass stem "<program_id>." for flat output directories or "" inside
/// a corpus instance directory.
ValidationOutputs write_validation(const AcceptanceReport& report, const std::filesystem::path& dir,
                                   const std::string& stem);

}  // namespace callwitness
