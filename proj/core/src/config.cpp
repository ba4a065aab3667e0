#include "callwitness/config.hpp"

#include "callwitness/process.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace callwitness {

namespace fs = std::filesystem;

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) throw Error(ErrorCode::invalid_argument, "unknown config key " + where + key);
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return {};
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

Settings parse_settings(std::string_view json, const fs::path& base_dir) {
    Settings s;
    try {
        const auto j = nlohmann::json::parse(json);
        if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "config must be a JSON object");
        reject_unknown(j,
                       {"toolchain", "timeout_s", "workers", "seed", "work_dir", "per_repo_cap", "test_fraction",
                        "pooling", "generator"},
                       "");
        if (j.contains("toolchain")) {
            const auto& t = j["toolchain"];
            reject_unknown(t, {"node", "java", "javac", "python", "pytrace"}, "toolchain.");
            s.exec.node = resolve(base_dir, t.value("node", ""));
            s.exec.java = resolve(base_dir, t.value("java", ""));
            s.exec.javac = resolve(base_dir, t.value("javac", ""));
            s.exec.python = resolve(base_dir, t.value("python", ""));
            s.exec.pytrace = resolve(base_dir, t.value("pytrace", ""));
        }
        s.exec.timeout_s = j.value("timeout_s", s.exec.timeout_s);
        s.exec.workers = j.value("workers", s.exec.workers);
        s.exec.seed = j.value("seed", s.exec.seed);
        if (j.contains("work_dir")) s.exec.work_dir = resolve(base_dir, j["work_dir"].get<std::string>());
        s.per_repo_cap = j.value("per_repo_cap", s.per_repo_cap);
        s.test_fraction = j.value("test_fraction", s.test_fraction);
        if (j.contains("pooling")) s.pooling = parse_pooling(j["pooling"].get<std::string>());
        if (j.contains("generator")) {
            const auto& g = j["generator"];
            reject_unknown(g, {"kind", "mock_file", "base_url", "model"}, "generator.");
            s.generator.kind = g.value("kind", s.generator.kind);
            s.generator.mock_file = resolve(base_dir, g.value("mock_file", ""));
            s.generator.base_url = g.value("base_url", "");
            s.generator.model = g.value("model", "");
            if (s.generator.kind != "mock" && s.generator.kind != "chat") {
                throw Error(ErrorCode::invalid_argument, "generator.kind must be mock or chat");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_argument, std::string("config: ") + e.what());
    }
    s.exec.validate();
    return s;
}

Settings load_settings(const fs::path& path) {
    return parse_settings(read_file(path), fs::absolute(path).parent_path());
}

}  // namespace callwitness
