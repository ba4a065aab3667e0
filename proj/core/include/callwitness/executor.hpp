#pragma once

#include "callwitness/instrumented_source.hpp"
#include "callwitness/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace callwitness {

/// Explicitly configured toolchain; nothing is looked up on PATH.
struct ExecConfig {
    std::filesystem::path node;
    std::filesystem::path java;
    std::filesystem::path javac;
    std::filesystem::path python;
    /// Python tracer shim (`callwitness-pytrace <target.py>`).
    std::filesystem::path pytrace;
    double timeout_s = 10.0;
    int workers = 1;
    std::uint64_t seed = 0;
    /// Empty means a per-process directory under the system temp dir.
    std::filesystem::path work_dir;

    /// Throws Error{invalid_argument} on timeout_s <= 0 or workers < 1.
    void validate() const;
    std::filesystem::path effective_work_dir() const;
};

enum class RunOutcome { ok, crashed, timeout, protocol_error };

std::string_view to_string(RunOutcome outcome) noexcept;

struct TraceRun {
    std::string program_id;
    EdgeSet edges;
    int exit_status = 0;
    std::int64_t duration_ms = 0;
    RunOutcome outcome = RunOutcome::ok;
    std::string stdout_digest;
    /// Compiler output, protocol problems or stderr tail; empty when ok.
    std::string diagnostics;
};

/// The program as it will run: instrumented text (java/javascript) or the
/// original (python, traced by the shim), plus the inventory and the
/// synthetic top-level caller.
struct PreparedProgram {
    ProgramInstance instance;
    std::string run_source;
    FunctionInventory inventory;
    QualifiedName toplevel;
    /// File name inside the run's src/ directory.
    std::string file_name;
    /// Java launch class; empty otherwise.
    std::string java_main;
};

/// Instruments (or, for already-instrumented text, re-derives the inventory
/// of) the instance. Throws Error{unsupported_construct, missing_entry_point}
/// for java/javascript and needs config.python for python inventories.
PreparedProgram prepare_program(const ProgramInstance& instance, const ExecConfig& config);

/// One traced execution in `<work>/<program_id>/run<run_index>/`.
/// Throws Error{toolchain_missing} and Error{compile_failure}.
TraceRun execute_traced(const ProgramInstance& instance, const ExecConfig& config, int run_index = 1);
TraceRun execute_traced(const PreparedProgram& program, const ExecConfig& config, int run_index = 1);

/// n sequential, independent runs. Compile failures surface as crashed runs
/// carrying the compiler diagnostics; toolchain-missing still throws.
std::vector<TraceRun> execute_n(const ProgramInstance& instance, int n, const ExecConfig& config);
std::vector<TraceRun> execute_n(const PreparedProgram& program, int n, const ExecConfig& config);

struct PlainRun {
    int exit_status = 0;
    bool timed_out = false;
    std::string stdout_digest;
    std::string stdout_text;
};

/// Runs the unmodified program (no tracer) for semantic-preservation checks.
PlainRun execute_plain(const ProgramInstance& instance, const ExecConfig& config);

}  // namespace callwitness
