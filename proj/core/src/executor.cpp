#include "callwitness/executor.hpp"

#include "callwitness/digest.hpp"
#include "callwitness/error.hpp"
#include "callwitness/java_instrumenter.hpp"
#include "callwitness/js_instrumenter.hpp"
#include "callwitness/process.hpp"
#include "callwitness/python_support.hpp"
#include "callwitness/trace_protocol.hpp"

#include <unistd.h>

namespace callwitness {

namespace fs = std::filesystem;

void ExecConfig::validate() const {
    if (!(timeout_s > 0)) throw Error(ErrorCode::invalid_argument, "timeout must be positive");
    if (workers < 1) throw Error(ErrorCode::invalid_argument, "workers must be at least 1");
}

fs::path ExecConfig::effective_work_dir() const {
    if (!work_dir.empty()) return work_dir;
    return fs::temp_directory_path() / ("callwitness-" + std::to_string(::getpid()));
}

std::string_view to_string(RunOutcome outcome) noexcept {
    switch (outcome) {
        case RunOutcome::ok: return "ok";
        case RunOutcome::crashed: return "crashed";
        case RunOutcome::timeout: return "timeout";
        case RunOutcome::protocol_error: return "protocol_error";
    }
    return "ok";
}

namespace {

const fs::path& require_tool(const fs::path& tool, std::string_view what) {
    if (tool.empty()) throw Error(ErrorCode::toolchain_missing, std::string(what) + " is not configured");
    if (!is_executable(tool)) {
        throw Error(ErrorCode::toolchain_missing, std::string(what) + " not executable: " + tool.string());
    }
    return tool;
}

std::string tail(const std::string& text, size_t max_bytes = 4000) {
    return text.size() <= max_bytes ? text : text.substr(text.size() - max_bytes);
}

fs::path fresh_dir(const fs::path& dir) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    return dir;
}

// Compiles `source_file` into `classes`; throws Error{compile_failure}.
void compile_java(const fs::path& source_file, const fs::path& classes, const fs::path& log, const ExecConfig& config) {
    fs::create_directories(classes);
    ProcessSpec spec;
    spec.argv = {require_tool(config.javac, "javac").string(), "-d", classes.string(), source_file.string()};
    spec.cwd = source_file.parent_path();
    spec.stdout_path = log;
    spec.stderr_path = log.string() + ".err";
    spec.timeout_s = std::max(config.timeout_s, 60.0);
    const auto r = run_process(spec);
    if (r.timed_out || r.exit_status != 0) {
        throw Error(ErrorCode::compile_failure, tail(read_file(spec.stdout_path) + read_file(spec.stderr_path)));
    }
}

}  // namespace

PreparedProgram prepare_program(const ProgramInstance& instance, const ExecConfig& config) {
    const std::string module = module_name_for(instance);
    const bool instrumented = contains_probes(instance.source);
    const std::string original = instrumented ? strip_probes(instance.source) : instance.source;
    switch (instance.language) {
        case Language::javascript: {
            auto inst = instrument_js(original, module);
            return PreparedProgram{instance, instrumented ? instance.source : std::move(inst.text),
                                   std::move(inst.inventory), std::move(inst.toplevel), module + ".js", {}};
        }
        case Language::java: {
            const auto inv = parse_java_subset(original);
            auto inst = instrument_java(original);
            const std::string stem = inv.public_class.empty() ? inv.main_class.substr(0, inv.main_class.find('.'))
                                                              : inv.public_class;
            return PreparedProgram{instance, instrumented ? instance.source : std::move(inst.text),
                                   std::move(inst.inventory), std::move(inst.toplevel), stem + ".java",
                                   inv.main_binary_name};
        }
        case Language::python: {
            const fs::path scratch = config.effective_work_dir() / instance.program_id;
            fs::create_directories(scratch);
            auto inv = python_inventory(original, module, require_tool(config.python, "python"), scratch);
            return PreparedProgram{instance, original, std::move(inv), toplevel_name(Language::python, module),
                                   module + ".py", {}};
        }
    }
    throw Error(ErrorCode::invalid_argument, "unknown language");
}

TraceRun execute_traced(const ProgramInstance& instance, const ExecConfig& config, int run_index) {
    return execute_traced(prepare_program(instance, config), config, run_index);
}

TraceRun execute_traced(const PreparedProgram& program, const ExecConfig& config, int run_index) {
    config.validate();
    const auto& instance = program.instance;
    const fs::path run_dir =
        fresh_dir(config.effective_work_dir() / instance.program_id / ("run" + std::to_string(run_index)));
    const fs::path src_dir = run_dir / "src";
    const fs::path source_file = src_dir / program.file_name;
    write_file(source_file, program.run_source);
    const fs::path trace_path = run_dir / "trace.log";

    ProcessSpec spec;
    spec.cwd = src_dir;
    spec.stdout_path = run_dir / "stdout.txt";
    spec.stderr_path = run_dir / "stderr.txt";
    spec.timeout_s = config.timeout_s;
    spec.env = {{"CALLWITNESS_TRACE_OUT", fs::absolute(trace_path).string()}};
    switch (instance.language) {
        case Language::javascript:
            spec.argv = {require_tool(config.node, "node").string(), source_file.string()};
            break;
        case Language::java: {
            const fs::path classes = run_dir / "classes";
            const fs::path java = require_tool(config.java, "java");
            compile_java(source_file, classes, run_dir / "compile.txt", config);
            spec.argv = {java.string(), "-cp", classes.string(), program.java_main};
            break;
        }
        case Language::python:
            spec.argv = {require_tool(config.pytrace, "python tracer shim").string(), source_file.string()};
            break;
    }

    const auto proc = run_process(spec);
    TraceRun run;
    run.program_id = instance.program_id;
    run.exit_status = proc.exit_status;
    run.duration_ms = proc.duration_ms;
    run.stdout_digest = sha256_hex(read_file(spec.stdout_path));

    std::string problem;
    if (fs::exists(trace_path)) {
        const auto trace = parse_trace(read_file(trace_path));
        if (!trace.ok()) problem = trace.error;
        if (trace.language && *trace.language != instance.language) problem = "trace language does not match program";
        const NameSet known = program.inventory.names();
        for (const auto& [caller_text, callee_text] : trace.calls) {
            try {
                QualifiedName caller = parse_qualified_name(caller_text, instance.language);
                QualifiedName callee = parse_qualified_name(callee_text, instance.language);
                const bool caller_ok = caller == program.toplevel || known.count(caller) != 0;
                if (!caller_ok || known.count(callee) == 0) {
                    if (problem.empty()) problem = "unknown name in edge " + caller_text + " -> " + callee_text;
                    continue;
                }
                run.edges.emplace(std::move(caller), std::move(callee));
            } catch (const Error& e) {
                if (problem.empty()) problem = e.what();
            }
        }
    } else {
        problem = "no trace file written";
    }

    if (proc.timed_out) {
        run.outcome = RunOutcome::timeout;
        run.diagnostics = "timed out after " + std::to_string(config.timeout_s) + " s";
    } else if (proc.exit_status != 0) {
        run.outcome = RunOutcome::crashed;
        run.diagnostics = tail(read_file(spec.stderr_path));
    } else if (!problem.empty()) {
        run.outcome = RunOutcome::protocol_error;
        run.diagnostics = problem;
    }
    return run;
}

std::vector<TraceRun> execute_n(const ProgramInstance& instance, int n, const ExecConfig& config) {
    return execute_n(prepare_program(instance, config), n, config);
}

std::vector<TraceRun> execute_n(const PreparedProgram& program, int n, const ExecConfig& config) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "execute_n needs n >= 1");
    std::vector<TraceRun> runs;
    runs.reserve(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) {
        try {
            runs.push_back(execute_traced(program, config, k));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::compile_failure) throw;
            TraceRun run;
            run.program_id = program.instance.program_id;
            run.exit_status = 1;
            run.outcome = RunOutcome::crashed;
            run.diagnostics = e.what();
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

PlainRun execute_plain(const ProgramInstance& instance, const ExecConfig& config) {
    config.validate();
    const fs::path dir = fresh_dir(config.effective_work_dir() / instance.program_id / "plain");
    const fs::path src_dir = dir / "src";
    ProcessSpec spec;
    spec.cwd = src_dir;
    spec.stdout_path = dir / "stdout.txt";
    spec.stderr_path = dir / "stderr.txt";
    spec.timeout_s = config.timeout_s;
    spec.unset_env = {"CALLWITNESS_TRACE_OUT"};
    const std::string module = module_name_for(instance);
    const std::string source = strip_probes(instance.source);
    switch (instance.language) {
        case Language::javascript: {
            const fs::path file = src_dir / (module + ".js");
            write_file(file, source);
            spec.argv = {require_tool(config.node, "node").string(), file.string()};
            break;
        }
        case Language::java: {
            const auto inv = parse_java_subset(source);
            const std::string stem =
                inv.public_class.empty() ? inv.main_class.substr(0, inv.main_class.find('.')) : inv.public_class;
            const fs::path file = src_dir / (stem + ".java");
            write_file(file, source);
            compile_java(file, dir / "classes", dir / "compile.txt", config);
            spec.argv = {require_tool(config.java, "java").string(), "-cp", (dir / "classes").string(),
                         inv.main_binary_name};
            break;
        }
        case Language::python: {
            const fs::path file = src_dir / (module + ".py");
            write_file(file, source);
            spec.argv = {require_tool(config.python, "python").string(), file.string()};
            break;
        }
    }
    const auto proc = run_process(spec);
    PlainRun out;
    out.exit_status = proc.exit_status;
    out.timed_out = proc.timed_out;
    out.stdout_text = read_file(spec.stdout_path);
    out.stdout_digest = sha256_hex(out.stdout_text);
    return out;
}

}  // namespace callwitness
