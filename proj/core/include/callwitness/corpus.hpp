#pragma once

// On-disk corpus layout:
//   <root>/<language>/<program_id>/{program.<ext>, callgraph.json, report.json, meta.json}
//   <root>/splits.json   repo -> split
//   <root>/stats.json

#include "callwitness/schema.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace callwitness {

struct InstanceMeta {
    std::string program_id;
    Language language = Language::python;
    std::string repo;
    std::string license;
    int stars = 0;
    /// Path of the original file inside its repository.
    std::string source_path;
};

std::filesystem::path instance_dir(const std::filesystem::path& root, Language language, const std::string& program_id);
std::string program_file_name(Language language);

/// Writes program.<ext> and meta.json, creating the directory.
std::filesystem::path write_instance(const std::filesystem::path& root, const ProgramInstance& instance,
                                     const InstanceMeta& meta);

/// Reads program.<ext>, meta.json and, when present, callgraph.json.
/// Throws Error{io_error} or Error{schema_violation}.
ProgramInstance load_instance(const std::filesystem::path& dir);
InstanceMeta load_meta(const std::filesystem::path& dir);

/// True if `dir` holds a program file and meta.json.
bool is_instance_dir(const std::filesystem::path& dir);

/// Instance directories under root (optionally one language), sorted by
/// language then program_id.
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& root,
                                                  std::optional<Language> language = std::nullopt);

std::string serialize_meta(const InstanceMeta& meta);
std::string serialize_splits(const std::vector<SplitAssignment>& splits);
/// Throws Error{schema_violation}.
std::vector<SplitAssignment> deserialize_splits(std::string_view data);

}  // namespace callwitness
