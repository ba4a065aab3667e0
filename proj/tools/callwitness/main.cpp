// callwitness: corpus construction, tracing, validation and scoring.
//
// Exit codes: 0 success, 1 domain rejection, 2 usage error, 3 infrastructure
// failure (missing toolchain, I/O, network).

#include "callwitness/config.hpp"
#include "callwitness/corpus.hpp"
#include "callwitness/executor.hpp"
#include "callwitness/generation_client.hpp"
#include "callwitness/java_instrumenter.hpp"
#include "callwitness/js_instrumenter.hpp"
#include "callwitness/pipeline.hpp"
#include "callwitness/process.hpp"
#include "callwitness/prompts.hpp"
#include "callwitness/repo_pool.hpp"
#include "callwitness/scorer.hpp"
#include "callwitness/validator.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace callwitness;

namespace {

enum Exit { kOk = 0, kRejected = 1, kUsage = 2, kInfra = 3 };

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> timeout;
    std::string lang;
    std::string out;
    std::string node, java, javac, python, pytrace, work_dir;
};

Settings resolve_settings(const Options& o) {
    Settings s = o.config.empty() ? Settings{} : load_settings(o.config);
    if (o.seed) s.exec.seed = *o.seed;
    if (o.workers) s.exec.workers = *o.workers;
    if (o.timeout) s.exec.timeout_s = *o.timeout;
    auto path_flag = [](fs::path& field, const std::string& flag) {
        if (!flag.empty()) field = fs::absolute(flag);
    };
    path_flag(s.exec.node, o.node);
    path_flag(s.exec.java, o.java);
    path_flag(s.exec.javac, o.javac);
    path_flag(s.exec.python, o.python);
    path_flag(s.exec.pytrace, o.pytrace);
    path_flag(s.exec.work_dir, o.work_dir);
    s.exec.validate();
    return s;
}

std::optional<Language> lang_filter(const Options& o) {
    if (o.lang.empty()) return std::nullopt;
    try {
        return parse_language(o.lang);
    } catch (const Error&) {
        throw Error(ErrorCode::invalid_argument, "--lang must be python, javascript or java");
    }
}

void emit(const Options& o, const std::string& default_name, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    fs::path target(o.out);
    if (fs::is_directory(target) && !default_name.empty()) target /= default_name;
    write_file(target, text);
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; the first exception
// is rethrown after every thread has finished.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn fn) {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
        for (size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    const size_t count = std::min<size_t>(static_cast<size_t>(std::max(workers, 1)), std::max<size_t>(n, 1));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// A program given either as a corpus instance directory or a bare file.
ProgramInstance load_program(const std::string& target, const Options& o) {
    const fs::path p(target);
    if (fs::is_directory(p)) {
        if (!is_instance_dir(p)) throw Error(ErrorCode::invalid_argument, target + " is not an instance directory");
        return load_instance(p);
    }
    if (!fs::is_regular_file(p)) throw Error(ErrorCode::invalid_argument, target + " does not exist");
    std::optional<Language> lang = lang_filter(o);
    if (!lang) lang = language_for_path(p);
    if (!lang) throw Error(ErrorCode::invalid_argument, "cannot tell the language of " + target + "; pass --lang");
    return ProgramInstance::make(p.stem().string(), *lang, read_file(p), "local");
}

std::string edges_json(const ProgramInstance& inst, const EdgeSet& edges) {
    nlohmann::ordered_json j;
    j["program_id"] = inst.program_id;
    j["language"] = to_string(inst.language);
    std::map<std::string, std::vector<std::string>> by_caller;
    for (const auto& e : edges) by_caller[e.caller.text()].push_back(e.callee.text());
    nlohmann::ordered_json je = nlohmann::ordered_json::object();
    for (const auto& [caller, callees] : by_caller) je[caller] = callees;
    j["edges"] = je;
    return j.dump(2) + "\n";
}

std::unique_ptr<GenerationClient> make_client(const Settings& s, const std::string& mock_flag) {
    if (!mock_flag.empty()) {
        return std::make_unique<MockGenerationClient>(MockGenerationClient::from_file(mock_flag));
    }
    if (s.generator.kind == "chat") {
        return std::make_unique<ChatCompletionsClient>(s.generator.base_url, s.generator.model, s.exec.seed);
    }
    if (s.generator.mock_file.empty()) {
        throw Error(ErrorCode::invalid_argument, "no generator configured: pass --mock or set generator in --config");
    }
    return std::make_unique<MockGenerationClient>(MockGenerationClient::from_file(s.generator.mock_file));
}

// ---- subcommands ----

int cmd_ingest(const Options& o, const std::string& fixture, bool github, int min_stars, int max_per_language) {
    resolve_settings(o);
    RepoCriteria criteria;
    criteria.min_stars = min_stars;
    criteria.max_per_language = max_per_language;
    if (auto l = lang_filter(o)) criteria.languages = {*l};
    std::vector<RepoRecord> records;
    if (github) {
        GitHubGraphQLClient client;
        records = query_repo_pool(client, criteria);
    } else {
        if (fixture.empty()) throw Error(ErrorCode::invalid_argument, "ingest needs --fixture or --github");
        auto client = FixtureRepoClient::from_file(fixture);
        records = query_repo_pool(client, criteria);
    }
    emit(o, "repos.json", serialize_repo_records(records));
    std::cerr << records.size() << " repositories admitted\n";
    return kOk;
}

int cmd_filter(const Options& o, const std::string& src, const std::string& candidates, int cap_flag) {
    const Settings s = resolve_settings(o);
    std::vector<CandidateFile> files;
    if (!src.empty()) files = scan_checkouts(src);
    else if (!candidates.empty()) files = deserialize_candidates(read_file(candidates));
    else throw Error(ErrorCode::invalid_argument, "filter needs --src or --candidates");
    if (auto l = lang_filter(o)) {
        std::erase_if(files, [&](const CandidateFile& f) { return f.language != *l; });
    }
    const size_t before = files.size();
    const int cap = cap_flag > 0 ? cap_flag : s.per_repo_cap;
    auto kept = filter_candidates(std::move(files), cap, s.exec.seed);
    emit(o, "candidates.json", serialize_candidates(kept));
    std::cerr << kept.size() << " of " << before << " candidate files kept\n";
    return kept.empty() ? kRejected : kOk;
}

int cmd_harness(const Options& o, const std::string& candidates_path, const std::string& repos_path,
                const std::string& mock) {
    const Settings s = resolve_settings(o);
    if (o.out.empty()) throw Error(ErrorCode::invalid_argument, "harness needs --out <corpus dir>");
    auto candidates = deserialize_candidates(read_file(candidates_path));
    if (auto l = lang_filter(o)) {
        std::erase_if(candidates, [&](const CandidateFile& f) { return f.language != *l; });
    }
    std::map<std::string, RepoRecord> repos;
    if (!repos_path.empty()) {
        for (auto& r : deserialize_repo_records(read_file(repos_path))) repos[r.slug] = r;
    }
    auto client = make_client(s, mock);

    // ids are assigned up front so the output does not depend on scheduling
    std::map<std::string, int> next_index;
    std::vector<std::string> ids;
    for (const auto& c : candidates) ids.push_back(make_program_id(c.repo, next_index[c.repo]++));

    std::atomic<int> accepted{0};
    std::mutex log_mu;
    parallel_for(candidates.size(), s.exec.workers, [&](size_t i) {
        const auto& c = candidates[i];
        try {
            ProgramInstance inst = generate_harness(c, *client, ids[i], s.exec);
            InstanceMeta meta{inst.program_id, inst.language, c.repo, "", 0, c.path};
            if (auto it = repos.find(c.repo); it != repos.end()) {
                meta.license = it->second.license;
                meta.stars = it->second.stars;
            }
            write_instance(o.out, inst, meta);
            ++accepted;
        } catch (const Error& e) {
            if (is_infrastructure(e.code())) throw;
            std::lock_guard lock(log_mu);
            std::cerr << ids[i] << " (" << c.repo << "/" << c.path << "): rejected, " << e.what() << "\n";
        }
    });
    std::cerr << accepted << " of " << candidates.size() << " harnesses written\n";
    return accepted == 0 ? kRejected : kOk;
}

int cmd_instrument(const Options& o, const std::string& target) {
    const ProgramInstance inst = load_program(target, o);
    if (inst.language == Language::python) {
        throw Error(ErrorCode::invalid_argument, "python programs run unmodified under the tracer shim");
    }
    const InstrumentedSource out = inst.language == Language::java
                                       ? instrument_java(inst.source)
                                       : instrument_js(inst.source, module_name_for(inst));
    emit(o, "", out.text);
    std::cerr << out.inventory.functions.size() << " functions instrumented\n";
    return kOk;
}

int cmd_trace(const Options& o, const std::string& target, int runs) {
    const Settings s = resolve_settings(o);
    const ProgramInstance inst = load_program(target, o);
    const auto results = execute_n(inst, runs, s.exec);
    bool ok = true;
    for (size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        std::cerr << "run " << (k + 1) << ": " << to_string(r.outcome) << ", " << r.edges.size() << " edges, exit "
                  << r.exit_status << "\n";
        if (r.outcome != RunOutcome::ok) {
            ok = false;
            if (!r.diagnostics.empty()) std::cerr << r.diagnostics << "\n";
        }
    }
    EdgeSet all;
    for (const auto& r : results) all.insert(r.edges.begin(), r.edges.end());
    emit(o, inst.program_id + ".edges.json", edges_json(inst, all));
    return ok ? kOk : kRejected;
}

int cmd_validate(const Options& o, std::vector<std::string> targets, const std::string& corpus) {
    const Settings s = resolve_settings(o);
    if (!corpus.empty()) {
        for (const auto& d : list_instances(corpus, lang_filter(o))) targets.push_back(d.string());
    }
    if (targets.empty()) throw Error(ErrorCode::invalid_argument, "validate needs instance directories or --corpus");
    std::atomic<int> rejected{0};
    std::mutex log_mu;
    parallel_for(targets.size(), s.exec.workers, [&](size_t i) {
        const fs::path target(targets[i]);
        const bool in_corpus = fs::is_directory(target);
        const ProgramInstance inst = load_program(targets[i], o);
        AcceptanceReport report;
        try {
            report = validate(inst, s.exec);
        } catch (const Error& e) {
            if (is_infrastructure(e.code())) throw;
            report.program_id = inst.program_id;
            report.language = inst.language;
            report.failures = {FailureReason::execution_error};
            report.detail = e.what();
        }
        if (in_corpus) {
            fs::remove(target / "callgraph.json");
            write_validation(report, target, "");
        } else {
            const fs::path dir = o.out.empty() ? target.parent_path() : fs::path(o.out);
            write_validation(report, dir, inst.program_id + ".");
        }
        std::lock_guard lock(log_mu);
        if (report.accepted) {
            std::cerr << inst.program_id << ": accepted, " << report.ground_truth->edges().size() << " edges\n";
        } else {
            ++rejected;
            std::cerr << inst.program_id << ": rejected, " << to_string(report.failures.front());
            if (!report.detail.empty()) std::cerr << " (" << report.detail << ")";
            std::cerr << "\n";
        }
    });
    return rejected == 0 ? kOk : kRejected;
}

std::vector<ProgramInstance> load_corpus(const std::string& root, std::optional<Language> lang) {
    std::vector<ProgramInstance> out;
    for (const auto& d : list_instances(root, lang)) out.push_back(load_instance(d));
    return out;
}

int cmd_split(const Options& o, const std::string& corpus, std::optional<double> fraction, bool strict) {
    const Settings s = resolve_settings(o);
    const auto instances = load_corpus(corpus, lang_filter(o));
    if (instances.empty()) throw Error(ErrorCode::empty_input, "no instances under " + corpus);
    const auto result = split_corpus(instances, fraction.value_or(s.test_fraction), s.exec.seed);
    const std::string text = serialize_splits(result.assignments);
    if (o.out.empty()) write_file(fs::path(corpus) / "splits.json", text);
    else emit(o, "splits.json", text);
    for (Language l : result.degenerate) {
        std::cerr << "warning: " << to_string(l) << " stratum cannot approximate the test fraction\n";
    }
    return strict && !result.degenerate.empty() ? kRejected : kOk;
}

int cmd_stats(const Options& o, const std::string& corpus) {
    resolve_settings(o);
    const auto instances = load_corpus(corpus, lang_filter(o));
    std::vector<SplitAssignment> splits;
    const fs::path split_file = fs::path(corpus) / "splits.json";
    if (fs::exists(split_file)) splits = deserialize_splits(read_file(split_file));
    const auto stats = corpus_stats(instances, splits);
    const std::string text = serialize_stats(stats);
    if (o.out.empty()) write_file(fs::path(corpus) / "stats.json", text);
    else emit(o, "stats.json", text);
    std::cout << format_stats_table(stats);
    return kOk;
}

int cmd_prompt(const Options& o, const std::string& target, const std::string& kind) {
    const ProgramInstance inst = load_program(target, o);
    std::string text;
    if (kind == "eval") {
        const EvalPrompt p = render_eval_prompt(inst);
        text = "[SYSTEM]\n" + p.system_text + "\n\n[USER]\n" + p.user_text;
    } else if (kind == "cot") {
        text = render_cot_prompt(inst);
    } else if (kind == "answers") {
        if (!inst.ground_truth) throw Error(ErrorCode::missing_ground_truth, inst.program_id + " has no ground truth");
        text = render_answer_block(*inst.ground_truth, question_callers(*inst.ground_truth));
    } else {
        throw Error(ErrorCode::invalid_argument, "--kind must be eval, cot or answers");
    }
    emit(o, "", text);
    return kOk;
}

std::map<std::string, std::string> load_answers(const fs::path& path) {
    std::map<std::string, std::string> answers;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            const std::string name = entry.path().filename().string();
            const std::string suffix = ".answer.txt";
            if (entry.is_regular_file() && name.ends_with(suffix)) {
                answers[name.substr(0, name.size() - suffix.size())] = read_file(entry.path());
            }
        }
        return answers;
    }
    const std::string data = read_file(path);
    size_t pos = 0;
    int line_no = 0;
    while (pos < data.size()) {
        size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        const std::string line = data.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            answers[j.at("program_id").get<std::string>()] = j.at("answer").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::invalid_argument,
                        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return answers;
}

int cmd_score(const Options& o, const std::string& gold_root, const std::string& answers_path,
              const std::string& pooling_flag, const std::string& split_filter, bool csv) {
    const Settings s = resolve_settings(o);
    const Pooling pooling = pooling_flag.empty() ? s.pooling : parse_pooling(pooling_flag);
    const auto answers = load_answers(answers_path);

    std::map<std::string, Split> split_of;
    if (!split_filter.empty()) {
        parse_split(split_filter);
        for (const auto& a : deserialize_splits(read_file(fs::path(gold_root) / "splits.json"))) split_of[a.repo] = a.split;
    }

    std::vector<ProgramScore> scores;
    std::vector<std::pair<Language, Metrics>> per_program;
    for (const auto& inst : load_corpus(gold_root, lang_filter(o))) {
        if (!inst.ground_truth) continue;
        if (!split_filter.empty()) {
            const auto it = split_of.find(inst.repo);
            if (it == split_of.end() || to_string(it->second) != split_filter) continue;
        }
        const auto callers = question_callers(*inst.ground_truth);
        const auto it = answers.find(inst.program_id);
        const AnswerSheet sheet =
            parse_answer(it == answers.end() ? std::string() : it->second, callers, inst.language, inst.program_id);
        ProgramScore ps{inst.program_id, inst.language, score_program(sheet, *inst.ground_truth, callers),
                        sheet.dropped};
        per_program.emplace_back(inst.language, ps.metrics);
        scores.push_back(std::move(ps));
    }
    if (scores.empty()) throw Error(ErrorCode::empty_input, "no gold instances to score under " + gold_root);
    const Aggregate totals = aggregate(per_program, pooling);
    const fs::path out_dir = o.out.empty() ? fs::current_path() : fs::path(o.out);
    write_file(out_dir / "scores.json", serialize_scores(scores, totals, pooling));
    if (csv) write_file(out_dir / "scores.csv", scores_csv(scores));
    std::printf("overall P=%.3f R=%.3f F1=%.3f over %zu programs\n", totals.overall.precision, totals.overall.recall,
                totals.overall.f1, scores.size());
    return kOk;
}

int exit_code_for(const Error& e) {
    if (is_infrastructure(e.code())) return kInfra;
    if (e.code() == ErrorCode::invalid_argument) return kUsage;
    return kRejected;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"callwitness: execution-verified call-graph benchmark toolkit"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "JSON config file; flags override it");
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--workers", o.workers, "Parallel workers for batch subcommands");
    app.add_option("--timeout", o.timeout, "Per-run timeout in seconds");
    app.add_option("--lang", o.lang, "python | javascript | java");
    app.add_option("--out", o.out, "Output file or directory");
    app.add_option("--node", o.node, "Path to node");
    app.add_option("--java", o.java, "Path to java");
    app.add_option("--javac", o.javac, "Path to javac");
    app.add_option("--python", o.python, "Path to the python interpreter");
    app.add_option("--pytrace", o.pytrace, "Path to callwitness-pytrace");
    app.add_option("--work-dir", o.work_dir, "Scratch directory for runs");
    app.fallthrough();

    std::function<int()> action;

    auto* ingest = app.add_subcommand("ingest", "Query the repository pool");
    std::string fixture;
    bool github = false;
    int min_stars = 50, max_per_language = 1000;
    ingest->add_option("--fixture", fixture, "JSON list of repo records to serve instead of GitHub");
    ingest->add_flag("--github", github, "Query the GitHub GraphQL API (needs GITHUB_TOKEN)");
    ingest->add_option("--min-stars", min_stars, "Minimum stargazers");
    ingest->add_option("--max-per-language", max_per_language, "Retrieval cap per language");
    ingest->callback([&] { action = [&] { return cmd_ingest(o, fixture, github, min_stars, max_per_language); }; });

    auto* filter = app.add_subcommand("filter", "Apply the size/definition funnel and per-repo cap");
    std::string src, candidates;
    int cap = 0;
    filter->add_option("--src", src, "Directory of checkouts laid out as <owner>/<name>/...");
    filter->add_option("--candidates", candidates, "Candidate list (JSON) to refilter");
    filter->add_option("--cap", cap, "Per-repository cap (default 30)");
    filter->callback([&] { action = [&] { return cmd_filter(o, src, candidates, cap); }; });

    auto* harness = app.add_subcommand("harness", "Generate harnessed programs into a corpus");
    std::string harness_candidates, repos, mock;
    harness->add_option("--candidates", harness_candidates, "Candidate list from `filter`")->required();
    harness->add_option("--repos", repos, "Repo list from `ingest`, for license and star metadata");
    harness->add_option("--mock", mock, "Canned responses keyed by prompt SHA-256");
    harness->callback([&] { action = [&] { return cmd_harness(o, harness_candidates, repos, mock); }; });

    auto* instrument = app.add_subcommand("instrument", "Print the instrumented program");
    std::string instrument_target;
    instrument->add_option("target", instrument_target, "Instance directory or source file")->required();
    instrument->callback([&] { action = [&] { return cmd_instrument(o, instrument_target); }; });

    auto* trace = app.add_subcommand("trace", "Run the traced program and print its edges");
    std::string trace_target;
    int runs = 1;
    trace->add_option("target", trace_target, "Instance directory or source file")->required();
    trace->add_option("--runs", runs, "Number of independent runs")->check(CLI::PositiveNumber);
    trace->callback([&] { action = [&] { return cmd_trace(o, trace_target, runs); }; });

    auto* validate_cmd = app.add_subcommand("validate", "Three-run acceptance check; writes callgraph.json");
    std::vector<std::string> validate_targets;
    std::string validate_corpus;
    validate_cmd->add_option("targets", validate_targets, "Instance directories or source files");
    validate_cmd->add_option("--corpus", validate_corpus, "Validate every instance under a corpus root");
    validate_cmd->callback([&] { action = [&] { return cmd_validate(o, validate_targets, validate_corpus); }; });

    auto* split = app.add_subcommand("split", "Repo-level stratified train/test split");
    std::string split_corpus_dir;
    std::optional<double> fraction;
    bool strict = false;
    split->add_option("--corpus", split_corpus_dir, "Corpus root")->required();
    split->add_option("--test-fraction", fraction, "Test fraction (default 0.2012)");
    split->add_flag("--strict", strict, "Exit 1 if a language stratum misses the fraction");
    split->callback([&] { action = [&] { return cmd_split(o, split_corpus_dir, fraction, strict); }; });

    auto* stats = app.add_subcommand("stats", "Per-language corpus statistics");
    std::string stats_corpus;
    stats->add_option("--corpus", stats_corpus, "Corpus root")->required();
    stats->callback([&] { action = [&] { return cmd_stats(o, stats_corpus); }; });

    auto* prompt = app.add_subcommand("prompt", "Render the evaluation or reasoning-trace prompt");
    std::string prompt_target, kind = "eval";
    prompt->add_option("target", prompt_target, "Instance directory")->required();
    prompt->add_option("--kind", kind, "eval | cot | answers");
    prompt->callback([&] { action = [&] { return cmd_prompt(o, prompt_target, kind); }; });

    auto* score = app.add_subcommand("score", "Score model answers against the gold corpus");
    std::string gold, answers, pooling, split_filter;
    bool csv = false;
    score->add_option("--gold", gold, "Corpus root with callgraph.json files")->required();
    score->add_option("--answers", answers, "answers.jsonl or a directory of <id>.answer.txt")->required();
    score->add_option("--pooling", pooling, "Within-language pooling: micro | macro");
    score->add_option("--split", split_filter, "Only score programs of this split (train | test)");
    score->add_flag("--csv", csv, "Also write scores.csv");
    score->callback([&] { action = [&] { return cmd_score(o, gold, answers, pooling, split_filter, csv); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        return action ? action() : kUsage;
    } catch (const Error& e) {
        std::cerr << "callwitness: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "callwitness: " << e.what() << "\n";
        return kInfra;
    } catch (const std::exception& e) {
        std::cerr << "callwitness: " << e.what() << "\n";
        return kInfra;
    }
}
