#include "callwitness/pipeline.hpp"

#include "callwitness/digest.hpp"
#include "callwitness/java_instrumenter.hpp"
#include "callwitness/js_instrumenter.hpp"
#include "callwitness/process.hpp"
#include "callwitness/prompts.hpp"
#include "callwitness/python_support.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

namespace callwitness {

namespace fs = std::filesystem;

namespace {

// std::uniform_int_distribution is implementation-defined, which would make
// the same seed sample differently under another standard library.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

template <typename T>
void shuffle_prefix(std::vector<T>& v, size_t k, std::mt19937_64& rng) {
    for (size_t i = 0; i < k && i + 1 < v.size(); ++i) {
        const size_t j = i + static_cast<size_t>(uniform_below(rng, v.size() - i));
        std::swap(v[i], v[j]);
    }
}

size_t count_matches(const std::string& text, const std::regex& re) {
    return static_cast<size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

const std::set<std::string, std::less<>>& node_builtins() {
    static const std::set<std::string, std::less<>> names = {
        "assert", "async_hooks", "buffer", "child_process", "cluster", "console", "constants", "crypto",
        "dgram", "diagnostics_channel", "dns", "domain", "events", "fs", "fs/promises", "http", "http2",
        "https", "inspector", "module", "net", "os", "path", "path/posix", "path/win32", "perf_hooks",
        "process", "punycode", "querystring", "readline", "repl", "stream", "string_decoder", "sys",
        "timers", "tls", "trace_events", "tty", "url", "util", "v8", "vm", "wasi", "worker_threads", "zlib",
    };
    return names;
}

}  // namespace

int count_definitions(std::string_view source, Language language) {
    const std::string text(source);
    switch (language) {
        case Language::python: {
            static const std::regex re(R"((^|\n)[ \t]*(async[ \t]+)?(def|class)[ \t]+[A-Za-z_])");
            return static_cast<int>(count_matches(text, re));
        }
        case Language::javascript: {
            static const std::regex fn(R"(\bfunction\b)");
            static const std::regex cls(R"(\bclass\s+[A-Za-z_$])");
            static const std::regex arrow(R"(=>)");
            return static_cast<int>(count_matches(text, fn) + count_matches(text, cls) + count_matches(text, arrow));
        }
        case Language::java: {
            static const std::regex type(R"(\b(class|interface|enum|record)\s+[A-Za-z_$])");
            static const std::regex method(
                R"(\b[A-Za-z_$][\w$<>\[\],.?]*\s+([A-Za-z_$][\w$]*)\s*\([^;{}()]*\)\s*(throws\s+[\w$.,\s]+)?\{)");
            size_t n = 0;
            // line by line keeps libstdc++'s recursive matcher off long inputs
            std::istringstream lines(text);
            for (std::string line; std::getline(lines, line);) {
                n += count_matches(line, type);
                std::smatch m;
                if (!std::regex_search(line, m, method)) continue;
                const std::string name = m[1];
                if (name != "if" && name != "for" && name != "while" && name != "switch" && name != "catch" &&
                    name != "synchronized") {
                    ++n;
                }
            }
            return static_cast<int>(n);
        }
    }
    return 0;
}

CandidateFile CandidateFile::make(std::string repo, std::string path, Language language, std::string source) {
    CandidateFile f;
    f.repo = std::move(repo);
    f.path = std::move(path);
    f.language = language;
    f.loc = count_loc(source);
    f.def_count = count_definitions(source, language);
    f.source = std::move(source);
    return f;
}

bool admits(const CandidateFile& file) noexcept {
    return file.loc >= kMinCandidateLoc && file.def_count >= kMinCandidateDefs;
}

std::vector<CandidateFile> filter_candidates(std::vector<CandidateFile> files, int per_repo_cap, std::uint64_t seed) {
    if (per_repo_cap < 1) throw Error(ErrorCode::invalid_argument, "per-repo cap must be at least 1");
    std::map<std::string, std::vector<CandidateFile>> by_repo;
    for (auto& f : files) {
        if (admits(f)) by_repo[f.repo].push_back(std::move(f));
    }
    auto by_path = [](const CandidateFile& a, const CandidateFile& b) { return a.path < b.path; };
    std::vector<CandidateFile> out;
    for (auto& [repo, list] : by_repo) {
        std::sort(list.begin(), list.end(), by_path);
        const auto cap = static_cast<size_t>(per_repo_cap);
        if (list.size() > cap) {
            std::mt19937_64 rng(seed ^ fnv1a64(repo));
            shuffle_prefix(list, cap, rng);
            list.resize(cap);
            std::sort(list.begin(), list.end(), by_path);
        }
        for (auto& f : list) out.push_back(std::move(f));
    }
    return out;
}

std::optional<Language> language_for_path(const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".py") return Language::python;
    if (ext == ".js" || ext == ".cjs") return Language::javascript;
    if (ext == ".java") return Language::java;
    return std::nullopt;
}

std::vector<CandidateFile> scan_checkouts(const fs::path& root) {
    std::vector<CandidateFile> out;
    if (!fs::is_directory(root)) throw Error(ErrorCode::io_error, root.string() + " is not a directory");
    for (const auto& owner : fs::directory_iterator(root)) {
        if (!owner.is_directory()) continue;
        for (const auto& repo : fs::directory_iterator(owner.path())) {
            if (!repo.is_directory()) continue;
            const std::string slug = owner.path().filename().string() + "/" + repo.path().filename().string();
            for (const auto& entry : fs::recursive_directory_iterator(repo.path())) {
                if (!entry.is_regular_file()) continue;
                const auto lang = language_for_path(entry.path());
                if (!lang) continue;
                out.push_back(CandidateFile::make(slug, fs::relative(entry.path(), repo.path()).generic_string(), *lang,
                                                  read_file(entry.path())));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const CandidateFile& a, const CandidateFile& b) {
        return std::tie(a.repo, a.path) < std::tie(b.repo, b.path);
    });
    return out;
}

std::string serialize_candidates(const std::vector<CandidateFile>& files) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : files) {
        nlohmann::ordered_json j;
        j["repo"] = f.repo;
        j["path"] = f.path;
        j["language"] = to_string(f.language);
        j["loc"] = f.loc;
        j["def_count"] = f.def_count;
        j["source"] = f.source;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<CandidateFile> deserialize_candidates(std::string_view data) {
    std::vector<CandidateFile> out;
    try {
        const auto arr = nlohmann::json::parse(data);
        if (!arr.is_array()) throw Error(ErrorCode::schema_violation, "candidate list must be a JSON array");
        for (const auto& j : arr) {
            out.push_back(CandidateFile::make(j.at("repo").get<std::string>(), j.at("path").get<std::string>(),
                                              parse_language(j.at("language").get<std::string>()),
                                              j.at("source").get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema_violation, std::string("candidate list: ") + e.what());
    }
    return out;
}

std::string render_harness_prompt(const CandidateFile& candidate) {
    return render_harness_prompt(candidate.language, candidate.repo, candidate.source);
}

std::string strip_code_fences(std::string_view response) {
    std::string_view body = response;
    const size_t open = body.find("```");
    if (open != std::string_view::npos) {
        const size_t line_end = body.find('\n', open);
        if (line_end != std::string_view::npos) {
            const std::string_view rest = body.substr(line_end + 1);
            const size_t close = rest.find("```");
            body = close == std::string_view::npos ? rest : rest.substr(0, close);
        }
    }
    while (!body.empty() && (body.front() == '\n' || body.front() == '\r')) body.remove_prefix(1);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back())) != 0) body.remove_suffix(1);
    std::string out(body);
    out += '\n';
    return out;
}

void check_harness(const ProgramInstance& instance, const ExecConfig& config) {
    try {
        switch (instance.language) {
            case Language::python: {
                if (config.python.empty()) throw Error(ErrorCode::toolchain_missing, "no python interpreter configured");
                const fs::path scratch = config.effective_work_dir() / instance.program_id / "check";
                python_check_harness(instance.source, config.python, scratch, config.timeout_s);
                return;
            }
            case Language::javascript: {
                parse_js_subset(instance.source, module_name_for(instance));
                static const std::regex req(R"(\brequire\s*\(\s*(['"])([^'"]*)\1\s*\))");
                for (auto it = std::sregex_iterator(instance.source.begin(), instance.source.end(), req);
                     it != std::sregex_iterator(); ++it) {
                    std::string mod = (*it)[2];
                    if (mod.starts_with("node:")) mod.erase(0, 5);
                    if (node_builtins().count(mod) == 0) {
                        throw Error(ErrorCode::not_compilable, "require of non-builtin module '" + mod + "'");
                    }
                }
                return;
            }
            case Language::java: {
                const JavaMethodInventory inv = parse_java_subset(instance.source);
                for (const auto& imp : inv.imports) {
                    if (!imp.starts_with("java.") && !imp.starts_with("javax.")) {
                        throw Error(ErrorCode::not_compilable, "import of non-JDK package '" + imp + "'");
                    }
                }
                return;
            }
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::not_compilable || is_infrastructure(e.code())) throw;
        throw Error(ErrorCode::not_compilable, e.what(), e.line());
    }
}

ProgramInstance generate_harness(const CandidateFile& candidate, GenerationClient& client,
                                 const std::string& program_id, const ExecConfig& config) {
    const std::string response = client.complete(render_harness_prompt(candidate));
    ProgramInstance instance =
        ProgramInstance::make(program_id, candidate.language, strip_code_fences(response), candidate.repo);
    if (count_loc(instance.source) == 0) throw Error(ErrorCode::not_compilable, "empty harness");
    check_harness(instance, config);
    return instance;
}

std::string render_cot_prompt(const ProgramInstance& instance) {
    const EvalPrompt prompt = render_eval_prompt(instance);
    return render_cot_prompt(prompt.user_text, render_answer_block(*instance.ground_truth, prompt.callers));
}

SplitResult split_corpus(const std::vector<ProgramInstance>& instances, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "test fraction must lie strictly between 0 and 1");
    }
    // stratum -> repo -> instance count
    std::map<Language, std::map<std::string, int>> strata;
    for (const auto& inst : instances) {
        if (inst.repo.empty()) throw Error(ErrorCode::invalid_argument, inst.program_id + " has no repo");
        ++strata[inst.language][inst.repo];
    }

    std::map<std::string, Split> assigned;
    SplitResult result;
    for (const auto& [lang, repos] : strata) {
        int size = 0;
        for (const auto& [repo, n] : repos) size += n;
        const double target = test_fraction * size;

        std::vector<std::pair<std::string, int>> order(repos.begin(), repos.end());
        std::mt19937_64 rng(seed ^ fnv1a64(to_string(lang)));
        shuffle_prefix(order, order.size(), rng);

        // repos already placed by another stratum keep their split
        int test = 0;
        for (const auto& [repo, n] : order) {
            const auto it = assigned.find(repo);
            if (it != assigned.end() && it->second == Split::test) test += n;
        }
        // first pass takes every repo that still fits under the target
        std::vector<std::pair<std::string, int>> skipped;
        for (const auto& [repo, n] : order) {
            if (assigned.count(repo) != 0) continue;
            if (test + n <= target) {
                assigned[repo] = Split::test;
                test += n;
            } else {
                skipped.emplace_back(repo, n);
            }
        }
        // second pass may cross the target when that lands closer to it
        for (const auto& [repo, n] : skipped) {
            const bool to_test = test < target && (test + n - target) < (target - test);
            assigned[repo] = to_test ? Split::test : Split::train;
            if (to_test) test += n;
        }
        if (std::abs(test - target) > kStratumTolerance) result.degenerate.push_back(lang);
    }
    for (const auto& [repo, split] : assigned) result.assignments.push_back({repo, split});
    return result;
}

std::map<Language, LanguageStats> corpus_stats(const std::vector<ProgramInstance>& instances,
                                               const std::vector<SplitAssignment>& splits, bool require_ground_truth) {
    std::map<std::string, Split> split_of;
    for (const auto& a : splits) split_of[a.repo] = a.split;

    struct Acc {
        long functions = 0, edges = 0, loc = 0;
        int n = 0;
    };
    std::map<Language, LanguageStats> out;
    std::map<Language, Acc> acc;
    for (const auto& inst : instances) {
        if (!inst.ground_truth && require_ground_truth) {
            throw Error(ErrorCode::missing_ground_truth, inst.program_id + " has no ground truth");
        }
        LanguageStats& s = out[inst.language];
        Acc& a = acc[inst.language];
        const auto it = split_of.find(inst.repo);
        if (it == split_of.end()) ++s.unassigned_programs;
        else if (it->second == Split::test) ++s.test_programs;
        else ++s.train_programs;
        const int functions = inst.ground_truth ? static_cast<int>(inst.ground_truth->functions().size()) : 0;
        const int edges = inst.ground_truth ? static_cast<int>(inst.ground_truth->edges().size()) : 0;
        a.functions += functions;
        a.edges += edges;
        a.loc += inst.loc;
        ++a.n;
        s.functions.max = std::max(s.functions.max, functions);
        s.edges.max = std::max(s.edges.max, edges);
        s.loc.max = std::max(s.loc.max, inst.loc);
    }
    for (auto& [lang, s] : out) {
        const Acc& a = acc[lang];
        s.functions.mean = static_cast<double>(a.functions) / a.n;
        s.edges.mean = static_cast<double>(a.edges) / a.n;
        s.loc.mean = static_cast<double>(a.loc) / a.n;
    }
    return out;
}

std::string serialize_stats(const std::map<Language, LanguageStats>& stats) {
    auto summary = [](const StatSummary& s) {
        nlohmann::ordered_json j;
        j["mean"] = std::round(s.mean * 1000.0) / 1000.0;
        j["max"] = s.max;
        return j;
    };
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [lang, s] : stats) {
        nlohmann::ordered_json l;
        l["programs"] = {{"test", s.test_programs}, {"train", s.train_programs}, {"unassigned", s.unassigned_programs}};
        l["functions_per_program"] = summary(s.functions);
        l["edges_per_program"] = summary(s.edges);
        l["loc_per_program"] = summary(s.loc);
        j[std::string(to_string(lang))] = l;
    }
    return j.dump(2) + "\n";
}

std::string format_stats_table(const std::map<Language, LanguageStats>& stats) {
    std::string out;
    char buf[160];
    auto row = [&](const char* group, const char* label, auto value) {
        std::snprintf(buf, sizeof buf, "%-20s %-6s", group, label);
        out += buf;
        for (const auto& [lang, s] : stats) {
            std::snprintf(buf, sizeof buf, " %10s", value(s).c_str());
            out += buf;
        }
        out += '\n';
    };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.1f", v);
        return std::string(b);
    };
    std::snprintf(buf, sizeof buf, "%-27s", "");
    out += buf;
    for (const auto& [lang, s] : stats) {
        std::snprintf(buf, sizeof buf, " %10s", std::string(display_name(lang)).c_str());
        out += buf;
    }
    out += '\n';
    row("Programs", "Test", [](const LanguageStats& s) { return std::to_string(s.test_programs); });
    row("", "Train", [](const LanguageStats& s) { return std::to_string(s.train_programs); });
    row("Functions/program", "Mean", [&](const LanguageStats& s) { return num(s.functions.mean); });
    row("", "Max", [](const LanguageStats& s) { return std::to_string(s.functions.max); });
    row("Edges/program", "Mean", [&](const LanguageStats& s) { return num(s.edges.mean); });
    row("", "Max", [](const LanguageStats& s) { return std::to_string(s.edges.max); });
    row("LOC/program", "Mean", [&](const LanguageStats& s) { return num(s.loc.mean); });
    row("", "Max", [](const LanguageStats& s) { return std::to_string(s.loc.max); });
    return out;
}

}  // namespace callwitness
