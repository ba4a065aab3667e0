#include <doctest.h>

#include "test_support.hpp"

#include <callwitness/corpus.hpp>
#include <callwitness/generation_client.hpp>
#include <callwitness/instrumented_source.hpp>
#include <callwitness/pipeline.hpp>
#include <callwitness/process.hpp>

#include <nlohmann/json.hpp>

using namespace callwitness;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status = -1;
    std::string out;
    std::string err;
};

CliRun cli(const std::string& tag, std::vector<std::string> args, const fs::path& cwd = {}) {
    const fs::path dir = cwtest::fresh_dir("cli-io-" + tag);
    ProcessSpec spec;
    spec.argv = {CALLWITNESS_CLI_PATH};
    spec.argv.insert(spec.argv.end(), args.begin(), args.end());
    spec.cwd = cwd.empty() ? dir : cwd;
    spec.stdout_path = dir / "stdout";
    spec.stderr_path = dir / "stderr";
    spec.timeout_s = 300;
    const auto r = run_process(spec);
    return {r.exit_status, read_file(dir / "stdout"), read_file(dir / "stderr")};
}

std::vector<std::string> toolchain(const std::string& tag) {
    return {"--node",   cwtest::paths::node,    "--java",     cwtest::paths::java,
            "--javac",  cwtest::paths::javac,   "--python",   cwtest::paths::python,
            "--pytrace", cwtest::paths::pytrace, "--work-dir", cwtest::fresh_dir("cli-work-" + tag).string()};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

fs::path fixture(const std::string& rel) { return fs::path(cwtest::paths::fixtures) / rel; }

}  // namespace

TEST_CASE("usage errors") {
    CHECK(cli("none", {}).status == 2);
    CHECK(cli("bogus", {"frobnicate"}).status == 2);
    CHECK(cli("help", {"--help"}).status == 0);
    CHECK(cli("lang", {"--lang", "cobol", "trace", fixture("validator/good.js").string()}).status == 2);
    CHECK(cli("missing", {"trace", "/nonexistent/x.js"}).status == 2);
    CHECK(cli("badconfig", {"--config", fixture("validator/good.js").string(), "stats", "--corpus", "."}).status == 2);
}

TEST_CASE("trace prints merged edges") {
    const auto r = cli("trace", concat(toolchain("trace"), {"trace", fixture("validator/good.js").string(), "--runs",
                                                            "2"}));
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["program_id"] == "good");
    CHECK(j["language"] == "javascript");
    CHECK(j["edges"]["good.<toplevel>"] == nlohmann::json::array({"good.f"}));
    CHECK(j["edges"]["good.f"] == nlohmann::json::array({"good.g"}));
    CHECK(r.err.find("run 2: ok") != std::string::npos);

    const auto crash = cli("trace-crash", concat(toolchain("trace-crash"),
                                                 {"trace", fixture("validator/crash.js").string()}));
    CHECK(crash.status == 1);
    CHECK(crash.err.find("crashed") != std::string::npos);
}

TEST_CASE("missing toolchain is an infrastructure failure") {
    const auto r = cli("notool", {"--node", "/nonexistent/node", "trace", fixture("validator/good.js").string()});
    CHECK(r.status == 3);
}

TEST_CASE("instrument prints probed source") {
    const auto r = cli("instrument", {"instrument", fixture("validator/good.js").string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("/*cw<*/") != std::string::npos);
    CHECK(strip_probes(r.out).find("function f") != std::string::npos);
    CHECK(cli("instrument-py", {"instrument", fixture("pipeline/loc20.py").string()}).status == 2);
}

TEST_CASE("validate writes report files next to loose programs") {
    const fs::path out = cwtest::fresh_dir("cli-validate-out");
    const auto good = cli("validate", concat(toolchain("validate"), {"--out", out.string(), "validate",
                                                                     fixture("validator/good.js").string()}));
    CHECK(good.status == 0);
    CHECK(fs::exists(out / "good.report.json"));
    CHECK(fs::exists(out / "good.callgraph.json"));

    const auto bad = cli("validate-bad", concat(toolchain("validate-bad"),
                                                {"--out", out.string(), "validate",
                                                 fixture("validator/one_cross_edge.js").string()}));
    CHECK(bad.status == 1);
    CHECK(bad.err.find("insufficient_edges") != std::string::npos);
    CHECK_FALSE(fs::exists(out / "one_cross_edge.callgraph.json"));
}

TEST_CASE("ingest from a fixture") {
    const fs::path dir = cwtest::fresh_dir("cli-ingest");
    write_file(dir / "pool.json", R"([
  {"slug": "b/two", "stars": 80, "license": "MIT", "language": "javascript"},
  {"slug": "a/one", "stars": 500, "license": "Apache-2.0", "language": "python"},
  {"slug": "c/low", "stars": 3, "license": "MIT", "language": "python"},
  {"slug": "d/gpl", "stars": 900, "license": "GPL-3.0", "language": "java"}
])");
    const auto r = cli("ingest", {"ingest", "--fixture", (dir / "pool.json").string()});
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["slug"] == "a/one");
    CHECK(j[1]["slug"] == "b/two");
    CHECK(cli("ingest-none", {"ingest"}).status == 2);
}

TEST_CASE("corpus workflow from checkouts to scores") {
    const fs::path root = cwtest::fresh_dir("cli-flow");
    const fs::path src = root / "src";
    write_file(src / "acme/widgets/lib/w.js", read_file(fixture("pipeline/loc20.js")));
    write_file(src / "acme/widgets/lib/tiny.js", read_file(fixture("pipeline/loc19.js")));
    write_file(src / "acme/widgets/README.md", "# widgets\n");

    // filter
    const auto filtered = cli("flow-filter", {"--out", (root / "candidates.json").string(), "filter", "--src",
                                              src.string()});
    REQUIRE(filtered.status == 0);
    const auto cands = deserialize_candidates(read_file(root / "candidates.json"));
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].repo == "acme/widgets");
    CHECK(cands[0].path == "lib/w.js");

    // harness
    MockGenerationClient mock;
    mock.add_response(render_harness_prompt(cands[0]), read_file(fixture("pipeline/harness/javascript.txt")));
    write_file(root / "mock.json", mock.serialize());
    const fs::path corpus = root / "corpus";
    const auto harnessed = cli("flow-harness", concat(toolchain("flow-harness"),
                                                      {"--out", corpus.string(), "harness", "--candidates",
                                                       (root / "candidates.json").string(), "--mock",
                                                       (root / "mock.json").string()}));
    REQUIRE(harnessed.status == 0);
    const fs::path inst = corpus / "javascript" / "widgets_0000";
    REQUIRE(is_instance_dir(inst));
    CHECK(load_meta(inst).source_path == "lib/w.js");

    // validate
    const auto validated = cli("flow-validate", concat(toolchain("flow-validate"),
                                                       {"validate", "--corpus", corpus.string()}));
    REQUIRE(validated.status == 0);
    REQUIRE(fs::exists(inst / "callgraph.json"));
    const std::string graph_bytes = read_file(inst / "callgraph.json");
    REQUIRE(cli("flow-validate-2", concat(toolchain("flow-validate-2"),
                                          {"validate", "--corpus", corpus.string()}))
                .status == 0);
    CHECK(read_file(inst / "callgraph.json") == graph_bytes);

    // split and stats
    REQUIRE(cli("flow-split", {"--seed", "7", "split", "--corpus", corpus.string()}).status == 0);
    const std::string splits = read_file(corpus / "splits.json");
    REQUIRE(cli("flow-split-2", {"--seed", "7", "split", "--corpus", corpus.string()}).status == 0);
    CHECK(read_file(corpus / "splits.json") == splits);
    CHECK(cli("flow-split-strict", {"split", "--corpus", corpus.string(), "--strict"}).status == 0);
    const auto stats = cli("flow-stats", {"stats", "--corpus", corpus.string()});
    REQUIRE(stats.status == 0);
    CHECK(nlohmann::json::parse(read_file(corpus / "stats.json")).contains("javascript"));

    // prompts
    const auto eval = cli("flow-prompt", {"prompt", inst.string()});
    REQUIRE(eval.status == 0);
    CHECK(eval.out.rfind("[SYSTEM]\n", 0) == 0);
    CHECK(eval.out.find("Which functions does widgets_0000.<toplevel> call?") != std::string::npos);
    const auto gold = cli("flow-answers", {"prompt", inst.string(), "--kind", "answers"});
    REQUIRE(gold.status == 0);
    CHECK(cli("flow-cot", {"prompt", inst.string(), "--kind", "cot"}).status == 0);
    CHECK(cli("flow-kind", {"prompt", inst.string(), "--kind", "poem"}).status == 2);

    // score: gold answers from a directory, then empty answers from jsonl
    const fs::path answers = root / "answers";
    write_file(answers / "widgets_0000.answer.txt", gold.out);
    const fs::path out1 = cwtest::fresh_dir("cli-flow-score-1");
    const auto s1 = cli("flow-score", {"--out", out1.string(), "score", "--gold", corpus.string(), "--answers",
                                       answers.string(), "--csv"});
    REQUIRE(s1.status == 0);
    CHECK(s1.out.find("overall P=1.000 R=1.000 F1=1.000 over 1 programs") != std::string::npos);
    CHECK(fs::exists(out1 / "scores.csv"));

    const fs::path out2 = cwtest::fresh_dir("cli-flow-score-2");
    REQUIRE(cli("flow-score-2", {"--out", out2.string(), "score", "--gold", corpus.string(), "--answers",
                                 answers.string(), "--csv"})
                .status == 0);
    CHECK(read_file(out2 / "scores.json") == read_file(out1 / "scores.json"));
    CHECK(read_file(out2 / "scores.csv") == read_file(out1 / "scores.csv"));

    write_file(root / "answers.jsonl", R"({"program_id": "widgets_0000", "answer": "I am not sure."})" "\n");
    const auto s3 = cli("flow-score-3", {"score", "--gold", corpus.string(), "--answers",
                                         (root / "answers.jsonl").string()},
                        cwtest::fresh_dir("cli-flow-score-3"));
    REQUIRE(s3.status == 0);
    CHECK(s3.out.find("overall P=0.000 R=0.000 F1=0.000") != std::string::npos);

    write_file(root / "broken.jsonl", "{not json\n");
    CHECK(cli("flow-score-4", {"score", "--gold", corpus.string(), "--answers", (root / "broken.jsonl").string()})
              .status == 2);
}

TEST_CASE("filter reports an empty funnel") {
    const fs::path src = cwtest::fresh_dir("cli-filter-empty");
    write_file(src / "o/r/tiny.py", read_file(fixture("pipeline/loc19.py")));
    CHECK(cli("filter-empty", {"filter", "--src", src.string()}).status == 1);
}
