#include "test_support.hpp"

#include <callwitness/process.hpp>

#include <algorithm>
#include <sstream>

namespace cwtest {

namespace fs = std::filesystem;
using namespace callwitness;

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::path(paths::scratch) / tag;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExecConfig exec_config(const std::string& tag) {
    ExecConfig config;
    config.node = paths::node;
    config.java = paths::java;
    config.javac = paths::javac;
    config.python = paths::python;
    config.pytrace = paths::pytrace;
    config.timeout_s = 30.0;
    config.work_dir = fresh_dir(tag);
    return config;
}

std::vector<Fixture> minicorpus(Language language) {
    const fs::path dir = fs::path(paths::fixtures) / "minicorpus" / std::string(to_string(language));
    std::vector<Fixture> out;
    const std::string ext = "." + std::string(source_extension(language));
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ext) continue;
        Fixture f{entry.path().stem().string(), language, entry.path(), entry.path()};
        f.expected.replace_extension(".expected");
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
    return out;
}

ProgramInstance load_program(const fs::path& source, Language language, const std::string& repo) {
    return ProgramInstance::make(source.stem().string(), language, read_file(source), repo);
}

EdgeSet read_expected(const fs::path& path, Language language) {
    std::istringstream in(read_file(path));
    EdgeSet edges;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto arrow = line.find(" -> ");
        if (arrow == std::string::npos) throw Error(ErrorCode::schema_violation, "bad oracle line: " + line);
        edges.emplace(parse_qualified_name(line.substr(0, arrow), language),
                      parse_qualified_name(line.substr(arrow + 4), language));
    }
    return edges;
}

CallGraph expected_graph(const Fixture& fixture, const ExecConfig& config) {
    const auto program = prepare_program(load_program(fixture.source, fixture.language), config);
    return CallGraph(fixture.language, fixture.name, read_expected(fixture.expected, fixture.language),
                     program.inventory.names());
}

std::string edge_lines(const EdgeSet& edges) {
    std::string out;
    for (const auto& e : edges) out += e.caller.text() + " -> " + e.callee.text() + "\n";
    return out;
}

}  // namespace cwtest
