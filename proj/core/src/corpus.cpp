#include "callwitness/corpus.hpp"

#include "callwitness/process.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace callwitness {

namespace fs = std::filesystem;

fs::path instance_dir(const fs::path& root, Language language, const std::string& program_id) {
    return root / std::string(to_string(language)) / program_id;
}

std::string program_file_name(Language language) { return "program." + std::string(source_extension(language)); }

std::string serialize_meta(const InstanceMeta& meta) {
    nlohmann::ordered_json j;
    j["program_id"] = meta.program_id;
    j["language"] = to_string(meta.language);
    j["repo"] = meta.repo;
    j["license"] = meta.license;
    j["stars"] = meta.stars;
    j["source_path"] = meta.source_path;
    return j.dump(2) + "\n";
}

fs::path write_instance(const fs::path& root, const ProgramInstance& instance, const InstanceMeta& meta) {
    const fs::path dir = instance_dir(root, instance.language, instance.program_id);
    write_file(dir / program_file_name(instance.language), instance.source);
    write_file(dir / "meta.json", serialize_meta(meta));
    return dir;
}

InstanceMeta load_meta(const fs::path& dir) {
    InstanceMeta meta;
    try {
        const auto j = nlohmann::json::parse(read_file(dir / "meta.json"));
        meta.program_id = j.at("program_id").get<std::string>();
        meta.language = parse_language(j.at("language").get<std::string>());
        meta.repo = j.value("repo", "");
        meta.license = j.value("license", "");
        meta.stars = j.value("stars", 0);
        meta.source_path = j.value("source_path", "");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema_violation, (dir / "meta.json").string() + ": " + e.what());
    }
    return meta;
}

ProgramInstance load_instance(const fs::path& dir) {
    const InstanceMeta meta = load_meta(dir);
    std::string source = read_file(dir / program_file_name(meta.language));
    std::optional<CallGraph> gold;
    if (fs::exists(dir / "callgraph.json")) {
        gold = deserialize_callgraph(read_file(dir / "callgraph.json"));
        if (gold->program_id() != meta.program_id || gold->language() != meta.language) {
            throw Error(ErrorCode::schema_violation, (dir / "callgraph.json").string() + " belongs to another program");
        }
    }
    return ProgramInstance::make(meta.program_id, meta.language, std::move(source), meta.repo, std::move(gold));
}

bool is_instance_dir(const fs::path& dir) {
    if (!fs::is_regular_file(dir / "meta.json")) return false;
    for (Language l : kAllLanguages) {
        if (fs::is_regular_file(dir / program_file_name(l))) return true;
    }
    return false;
}

std::vector<fs::path> list_instances(const fs::path& root, std::optional<Language> language) {
    std::vector<fs::path> out;
    for (Language l : kAllLanguages) {
        if (language && *language != l) continue;
        const fs::path lang_dir = root / std::string(to_string(l));
        if (!fs::is_directory(lang_dir)) continue;
        std::vector<fs::path> dirs;
        for (const auto& entry : fs::directory_iterator(lang_dir)) {
            if (entry.is_directory() && is_instance_dir(entry.path())) dirs.push_back(entry.path());
        }
        std::sort(dirs.begin(), dirs.end());
        out.insert(out.end(), dirs.begin(), dirs.end());
    }
    return out;
}

std::string serialize_splits(const std::vector<SplitAssignment>& splits) {
    std::vector<SplitAssignment> sorted = splits;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.repo < b.repo; });
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& s : sorted) j[s.repo] = to_string(s.split);
    return j.dump(2) + "\n";
}

std::vector<SplitAssignment> deserialize_splits(std::string_view data) {
    std::vector<SplitAssignment> out;
    try {
        const auto j = nlohmann::json::parse(data);
        if (!j.is_object()) throw Error(ErrorCode::schema_violation, "splits.json must be an object");
        for (const auto& [repo, split] : j.items()) out.push_back({repo, parse_split(split.get<std::string>())});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema_violation, std::string("splits.json: ") + e.what());
    }
    return out;
}

}  // namespace callwitness
