#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace callwitness {

struct ProcessSpec {
    std::vector<std::string> argv;  // argv[0] is the executable path
    /// Set (or replace) in the inherited environment.
    std::vector<std::pair<std::string, std::string>> env;
    /// Removed from the inherited environment.
    std::vector<std::string> unset_env;
    std::filesystem::path cwd;
    std::filesystem::path stdout_path;
    std::filesystem::path stderr_path;
    double timeout_s = 10.0;
};

struct ProcessResult {
    /// Exit code, or 128 + signal number for a signalled child.
    int exit_status = 0;
    bool timed_out = false;
    std::int64_t duration_ms = 0;
};

/// Runs one child in its own process group with stdin from /dev/null.
/// On timeout the whole group is killed. Throws Error{io_error} if the
/// child cannot be started and Error{toolchain_missing} if argv[0] is not
/// an executable file.
ProcessResult run_process(const ProcessSpec& spec);

/// True if `path` names an executable regular file.
bool is_executable(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace callwitness
