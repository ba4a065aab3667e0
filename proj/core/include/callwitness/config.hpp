#pragma once

#include "callwitness/executor.hpp"
#include "callwitness/pipeline.hpp"
#include "callwitness/scorer.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace callwitness {

struct GeneratorSettings {
    /// "mock" or "chat".
    std::string kind = "mock";
    /// Canned responses for the mock client.
    std::filesystem::path mock_file;
    std::string base_url;
    std::string model;
};

struct Settings {
    ExecConfig exec;
    int per_repo_cap = kDefaultPerRepoCap;
    double test_fraction = kDefaultTestFraction;
    Pooling pooling = Pooling::micro;
    GeneratorSettings generator;
};

/// Reads a JSON config document:
///   {"toolchain": {"node", "java", "javac", "python", "pytrace"},
///    "timeout_s", "workers", "seed", "work_dir", "per_repo_cap",
///    "test_fraction", "pooling",
///    "generator": {"kind", "mock_file", "base_url", "model"}}
/// Relative paths resolve against the config file's directory. Unknown keys
/// raise Error{invalid_argument}, as do ill-typed values.
Settings load_settings(const std::filesystem::path& path);
Settings parse_settings(std::string_view json, const std::filesystem::path& base_dir);

}  // namespace callwitness
