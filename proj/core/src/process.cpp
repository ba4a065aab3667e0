#include "callwitness/process.hpp"

#include "callwitness/error.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

extern char** environ;

namespace callwitness {

namespace fs = std::filesystem;

bool is_executable(const fs::path& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::io_error, "short write to " + path.string());
}

namespace {

std::vector<std::string> build_environment(const ProcessSpec& spec) {
    std::vector<std::string> env;
    auto overridden = [&](std::string_view entry) {
        const auto key = entry.substr(0, entry.find('='));
        for (const auto& u : spec.unset_env) {
            if (key == u) return true;
        }
        for (const auto& [k, v] : spec.env) {
            if (key == k) return true;
        }
        return false;
    };
    for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
        if (!overridden(*e)) env.emplace_back(*e);
    }
    for (const auto& [k, v] : spec.env) env.push_back(k + "=" + v);
    return env;
}

std::vector<char*> pointers(std::vector<std::string>& strings) {
    std::vector<char*> out;
    out.reserve(strings.size() + 1);
    for (auto& s : strings) out.push_back(s.data());
    out.push_back(nullptr);
    return out;
}

int open_output(const fs::path& path) {
    if (path.empty()) return ::open("/dev/null", O_WRONLY | O_CLOEXEC);
    return ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
}

}  // namespace

ProcessResult run_process(const ProcessSpec& spec) {
    if (spec.argv.empty()) throw Error(ErrorCode::invalid_argument, "empty command line");
    if (!is_executable(spec.argv[0])) {
        throw Error(ErrorCode::toolchain_missing, "not an executable: " + spec.argv[0]);
    }
    auto args = spec.argv;
    auto env = build_environment(spec);
    auto argp = pointers(args);
    auto envp = pointers(env);
    const std::string cwd = spec.cwd.string();

    const int in_fd = ::open("/dev/null", O_RDONLY | O_CLOEXEC);
    const int out_fd = open_output(spec.stdout_path);
    const int err_fd = open_output(spec.stderr_path);
    if (in_fd < 0 || out_fd < 0 || err_fd < 0) {
        for (int fd : {in_fd, out_fd, err_fd}) {
            if (fd >= 0) ::close(fd);
        }
        throw Error(ErrorCode::io_error, "cannot open child stdio for " + spec.argv[0]);
    }

    const auto started = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(in_fd);
        ::close(out_fd);
        ::close(err_fd);
        throw Error(ErrorCode::io_error, std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) ::_exit(127);
        ::dup2(in_fd, 0);
        ::dup2(out_fd, 1);
        ::dup2(err_fd, 2);
        ::execve(argp[0], argp.data(), envp.data());
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(in_fd);
    ::close(out_fd);
    ::close(err_fd);

    ProcessResult result;
    const auto deadline = started + std::chrono::duration<double>(spec.timeout_s);
    auto nap = std::chrono::microseconds(200);
    int status = 0;
    while (true) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0 && errno != EINTR) throw Error(ErrorCode::io_error, std::string("waitpid: ") + std::strerror(errno));
        if (std::chrono::steady_clock::now() >= deadline) {
            result.timed_out = true;
            ::killpg(pid, SIGKILL);
            ::kill(pid, SIGKILL);
            while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
            }
            break;
        }
        std::this_thread::sleep_for(nap);
        nap = std::min(nap * 2, std::chrono::microseconds(10000));
    }
    // reap any stragglers left in the group
    ::killpg(pid, SIGKILL);
    result.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    if (WIFEXITED(status)) {
        result.exit_status = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_status = 128 + WTERMSIG(status);
    }
    return result;
}

}  // namespace callwitness
