#pragma once

// Corpus-growing plumbing: candidate files and the size/definition funnel,
// harness generation through a GenerationClient, repository-level
// stratified splitting and per-language statistics.

#include "callwitness/executor.hpp"
#include "callwitness/generation_client.hpp"
#include "callwitness/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

inline constexpr int kMinCandidateLoc = 20;
inline constexpr int kMinCandidateDefs = 1;
inline constexpr int kDefaultPerRepoCap = 30;
inline constexpr double kDefaultTestFraction = 0.2012;
/// A stratum whose realised test count misses the target by more than this
/// many instances is reported as degenerate.
inline constexpr double kStratumTolerance = 2.0;

struct CandidateFile {
    std::string repo;
    std::string path;
    Language language = Language::python;
    std::string source;
    int loc = 0;
    int def_count = 0;

    /// Derives loc and def_count from the source.
    static CandidateFile make(std::string repo, std::string path, Language language, std::string source);
    bool operator==(const CandidateFile&) const = default;
};

/// Lexical count of function, method and class definitions. Comments and
/// strings are not excluded; the count only gates the "at least one" rule.
int count_definitions(std::string_view source, Language language);

bool admits(const CandidateFile& file) noexcept;

/// Drops files under kMinCandidateLoc or without definitions, then keeps a
/// uniform sample of `per_repo_cap` files from every larger repo. Output is
/// ordered by (repo, path) and fixed for a given seed.
std::vector<CandidateFile> filter_candidates(std::vector<CandidateFile> files, int per_repo_cap = kDefaultPerRepoCap,
                                             std::uint64_t seed = 0);

/// Language by file extension, or nullopt for anything else.
std::optional<Language> language_for_path(const std::filesystem::path& path);

/// Walks `<root>/<owner>/<name>/**` and returns every source file of a known
/// language; the repo slug is `<owner>/<name>`. Sorted by (repo, path).
std::vector<CandidateFile> scan_checkouts(const std::filesystem::path& root);

std::string serialize_candidates(const std::vector<CandidateFile>& files);
/// Throws Error{schema_violation}.
std::vector<CandidateFile> deserialize_candidates(std::string_view data);

std::string render_harness_prompt(const CandidateFile& candidate);

/// Removes a surrounding markdown code fence, if any, and normalises the
/// text to end in exactly one newline.
std::string strip_code_fences(std::string_view response);

/// Throws Error{not_compilable} if the program would not parse or reaches
/// outside its own file (python: non-stdlib imports; javascript: require of
/// a non-builtin module; java: imports outside java.* and javax.*).
void check_harness(const ProgramInstance& instance, const ExecConfig& config);

/// Prompt, complete, strip fences, check. Client failures propagate.
ProgramInstance generate_harness(const CandidateFile& candidate, GenerationClient& client,
                                 const std::string& program_id, const ExecConfig& config);

/// Reasoning-trace prompt built from the instance's evaluation prompt and its
/// gold answers. Throws Error{missing_ground_truth}.
std::string render_cot_prompt(const ProgramInstance& instance);

struct SplitResult {
    /// One entry per repo, sorted by repo.
    std::vector<SplitAssignment> assignments;
    /// Languages whose test count misses the target by more than the tolerance.
    std::vector<Language> degenerate;
};

/// Repo-level split stratified by language. Within each language the repos
/// are shuffled with the seed. A first walk puts a repo in test whenever that
/// keeps the stratum's test count at or under the target; a second walk over
/// the leftovers lets one repo cross the target if it lands closer to it
/// than stopping short. Throws
/// Error{invalid_argument} for a fraction outside (0, 1) or an instance
/// without a repo.
SplitResult split_corpus(const std::vector<ProgramInstance>& instances, double test_fraction = kDefaultTestFraction,
                         std::uint64_t seed = 0);

struct StatSummary {
    double mean = 0.0;
    int max = 0;
};

struct LanguageStats {
    int test_programs = 0;
    int train_programs = 0;
    int unassigned_programs = 0;
    StatSummary functions;
    StatSummary edges;
    StatSummary loc;
};

/// Per-language table in the shape Programs(test/train), Functions/program,
/// Edges/program, LOC/program. Instances without ground truth count zero
/// functions and edges only if `require_ground_truth` is false; otherwise
/// Error{missing_ground_truth}.
std::map<Language, LanguageStats> corpus_stats(const std::vector<ProgramInstance>& instances,
                                               const std::vector<SplitAssignment>& splits,
                                               bool require_ground_truth = true);

std::string serialize_stats(const std::map<Language, LanguageStats>& stats);
/// Plain-text table, one column per language.
std::string format_stats_table(const std::map<Language, LanguageStats>& stats);

}  // namespace callwitness
