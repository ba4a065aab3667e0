#include "callwitness/validator.hpp"

#include "callwitness/error.hpp"
#include "callwitness/process.hpp"

#include <nlohmann/json.hpp>

namespace callwitness {

std::string_view to_string(FailureReason reason) noexcept {
    switch (reason) {
        case FailureReason::execution_error: return "execution_error";
        case FailureReason::nondeterministic: return "nondeterministic";
        case FailureReason::insufficient_edges: return "insufficient_edges";
        case FailureReason::schema_invalid: return "schema_invalid";
    }
    return "execution_error";
}

int count_cross_function_edges(const EdgeSet& edges) {
    int n = 0;
    for (const auto& e : edges) n += e.caller.is_toplevel() ? 0 : 1;
    return n;
}

AcceptanceReport validate(const ProgramInstance& instance, const ExecConfig& config) {
    const PreparedProgram program = prepare_program(instance, config);
    AcceptanceReport report;
    report.program_id = instance.program_id;
    report.language = instance.language;
    report.runs = execute_n(program, kValidationRuns, config);

    auto reject = [&](FailureReason why, std::string detail) {
        report.failures.push_back(why);
        report.detail = std::move(detail);
        return report;
    };

    for (const auto& run : report.runs) {
        if (run.outcome != RunOutcome::ok) {
            return reject(FailureReason::execution_error,
                          std::string(to_string(run.outcome)) + ": " + run.diagnostics);
        }
    }
    const EdgeSet& common = report.runs.front().edges;
    for (const auto& run : report.runs) {
        if (run.edges != common) return reject(FailureReason::nondeterministic, "edge sets differ across runs");
    }
    const int cross = count_cross_function_edges(common);
    if (cross < kMinCrossFunctionEdges) {
        return reject(FailureReason::insufficient_edges,
                      std::to_string(cross) + " cross-function edge(s), need " + std::to_string(kMinCrossFunctionEdges));
    }
    try {
        CallGraph graph(instance.language, instance.program_id, common, program.inventory.names());
        const std::string bytes = serialize_callgraph(graph);
        if (deserialize_callgraph(bytes) != graph) throw Error(ErrorCode::schema_violation, "round trip changed graph");
        report.ground_truth = std::move(graph);
    } catch (const Error& e) {
        return reject(FailureReason::schema_invalid, e.what());
    }
    report.accepted = true;
    return report;
}

std::string serialize_report(const AcceptanceReport& report) {
    nlohmann::ordered_json j;
    j["program_id"] = report.program_id;
    j["language"] = to_string(report.language);
    j["accepted"] = report.accepted;
    auto failures = nlohmann::ordered_json::array();
    for (auto f : report.failures) failures.push_back(to_string(f));
    j["failures"] = failures;
    j["detail"] = report.detail;
    auto runs = nlohmann::ordered_json::array();
    for (const auto& r : report.runs) {
        nlohmann::ordered_json jr;
        jr["outcome"] = to_string(r.outcome);
        jr["exit_status"] = r.exit_status;
        jr["edge_count"] = r.edges.size();
        jr["stdout_digest"] = r.stdout_digest;
        runs.push_back(jr);
    }
    j["runs"] = runs;
    if (report.ground_truth) {
        j["functions"] = report.ground_truth->functions().size();
        j["edges"] = report.ground_truth->edges().size();
        j["cross_function_edges"] = count_cross_function_edges(report.ground_truth->edges());
    }
    return j.dump(2) + "\n";
}

ValidationOutputs write_validation(const AcceptanceReport& report, const std::filesystem::path& dir,
                                   const std::string& stem) {
    ValidationOutputs out;
    std::filesystem::create_directories(dir);
    out.report = dir / (stem + "report.json");
    write_file(out.report, serialize_report(report));
    const auto graph_path = dir / (stem + "callgraph.json");
    if (report.ground_truth) {
        write_file(graph_path, serialize_callgraph(*report.ground_truth));
        out.callgraph = graph_path;
    } else {
        std::error_code ec;
        std::filesystem::remove(graph_path, ec);
    }
    return out;
}

}  // namespace callwitness
