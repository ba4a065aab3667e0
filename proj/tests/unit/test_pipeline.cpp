#include <doctest.h>

#include "test_support.hpp"

#include <callwitness/digest.hpp>
#include <callwitness/pipeline.hpp>
#include <callwitness/process.hpp>
#include <callwitness/prompts.hpp>

#include <nlohmann/json.hpp>

#include <set>

using namespace callwitness;
namespace fs = std::filesystem;

namespace {

fs::path pipeline_fixture(const std::string& name) { return fs::path(cwtest::paths::fixtures) / "pipeline" / name; }

std::string file_with_defs(int loc) {
    std::string s = "def f():\n";
    for (int i = 1; i < loc; ++i) s += "    x" + std::to_string(i) + " = " + std::to_string(i) + "\n";
    return s;
}

std::vector<CandidateFile> big_repo(const std::string& repo, int files) {
    std::vector<CandidateFile> out;
    for (int i = 0; i < files; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "src/mod%02d.py", i);
        out.push_back(CandidateFile::make(repo, name, Language::python, file_with_defs(25)));
    }
    return out;
}

std::vector<ProgramInstance> synthetic_instances(int repos_per_language) {
    std::vector<ProgramInstance> out;
    for (Language l : kAllLanguages) {
        for (int r = 0; r < repos_per_language; ++r) {
            const std::string repo = std::string(to_string(l)) + "-owner/repo" + std::to_string(r);
            const int n = 1 + (r * 7) % 5;
            for (int k = 0; k < n; ++k) out.push_back(ProgramInstance::make(make_program_id(repo, k), l, "x\n", repo));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("definition counting") {
    CHECK(count_definitions("def f():\n  pass\nclass A:\n  async def g(self):\n    pass\n", Language::python) == 3);
    CHECK(count_definitions("x = 'no defs here'\n", Language::python) == 0);
    CHECK(count_definitions("function f() {}\nclass A {}\nconst g = (x) => x;\n", Language::javascript) == 3);
    CHECK(count_definitions("const x = 1;\n", Language::javascript) == 0);
    CHECK(count_definitions("public class A {\n  int f(int x) {\n    if (x > 0) {\n      return 1;\n    }\n"
                            "    return 0;\n  }\n}\n",
                            Language::java) == 2);
    CHECK(count_definitions("interface I {}\n", Language::java) == 1);
}

TEST_CASE("size filter boundary") {
    for (Language l : kAllLanguages) {
        const std::string ext = std::string(source_extension(l));
        const auto c19 = CandidateFile::make("o/r", "loc19." + ext, l, read_file(pipeline_fixture("loc19." + ext)));
        const auto c20 = CandidateFile::make("o/r", "loc20." + ext, l, read_file(pipeline_fixture("loc20." + ext)));
        CAPTURE(ext);
        CHECK(c19.loc == 19);
        CHECK(c20.loc == 20);
        CHECK(c19.def_count >= 1);
        CHECK_FALSE(admits(c19));
        CHECK(admits(c20));
    }
    CHECK_FALSE(admits(CandidateFile::make("o/r", "a.py", Language::python, std::string(30, '\n') + "x = 1\n")));
}

TEST_CASE("per-repo cap") {
    auto files = big_repo("o/big", 45);
    auto small = big_repo("o/small", 3);
    files.insert(files.end(), small.begin(), small.end());
    files.push_back(CandidateFile::make("o/small", "tiny.py", Language::python, "def f():\n    pass\n"));

    const auto kept = filter_candidates(files, 30, 7);
    REQUIRE(kept.size() == 33);
    std::set<std::string> big_paths;
    for (const auto& f : kept) {
        if (f.repo == "o/big") big_paths.insert(f.path);
    }
    CHECK(big_paths.size() == 30);
    for (size_t i = 1; i < kept.size(); ++i) {
        CHECK(std::tie(kept[i - 1].repo, kept[i - 1].path) < std::tie(kept[i].repo, kept[i].path));
    }
    CHECK(filter_candidates(files, 30, 7) == kept);

    std::reverse(files.begin(), files.end());
    CHECK(filter_candidates(files, 30, 7) == kept);  // input order does not matter
    CHECK(filter_candidates(files, 30, 8) != kept);
    CHECK(filter_candidates(files, 50, 7).size() == 48);
    CHECK_THROWS_AS(filter_candidates(files, 0, 7), Error);
}

TEST_CASE("the cap samples every file about equally often") {
    const auto files = big_repo("o/big", 45);
    std::map<std::string, int> hits;
    const int trials = 600;
    for (int seed = 0; seed < trials; ++seed) {
        for (const auto& f : filter_candidates(files, 30, static_cast<std::uint64_t>(seed))) ++hits[f.path];
    }
    REQUIRE(hits.size() == 45);
    // expected 400 per file; binomial sd ~11.5
    for (const auto& [path, n] : hits) {
        CAPTURE(path);
        CHECK(n > 340);
        CHECK(n < 460);
    }
}

TEST_CASE("checkout scan") {
    const auto root = cwtest::fresh_dir("scan");
    write_file(root / "alice" / "tool" / "src" / "a.py", "def f():\n    pass\n");
    write_file(root / "alice" / "tool" / "README.md", "# tool\n");
    write_file(root / "alice" / "tool" / "lib" / "b.js", "function g() {}\n");
    write_file(root / "bob" / "app" / "Main.java", "class Main {}\n");
    const auto files = scan_checkouts(root);
    REQUIRE(files.size() == 3);
    CHECK(files[0].repo == "alice/tool");
    CHECK(files[0].path == "lib/b.js");
    CHECK(files[0].language == Language::javascript);
    CHECK(files[1].path == "src/a.py");
    CHECK(files[2].repo == "bob/app");
    CHECK_THROWS_AS(scan_checkouts(root / "missing"), Error);

    CHECK(language_for_path("x.cjs") == Language::javascript);
    CHECK_FALSE(language_for_path("x.ts"));

    const auto round = deserialize_candidates(serialize_candidates(files));
    CHECK(round == files);
    CHECK_THROWS_AS(deserialize_candidates("{}"), Error);
    CHECK_THROWS_AS(deserialize_candidates("[{\"repo\": \"a/b\"}]"), Error);
}

TEST_CASE("code fences") {
    CHECK(strip_code_fences("```python\nprint(1)\n```\n") == "print(1)\n");
    CHECK(strip_code_fences("Here you go:\n```\nx = 1\n```\nEnjoy") == "x = 1\n");
    CHECK(strip_code_fences("\n\nx = 1\n\n\n") == "x = 1\n");
    CHECK(strip_code_fences("```js\nf();") == "f();\n");
}

TEST_CASE("harness checks") {
    const auto config = cwtest::exec_config("harness-check");
    auto check = [&](Language l, const std::string& src) {
        check_harness(ProgramInstance::make("h", l, src, "o/r"), config);
    };
    auto rejected = [&](Language l, const std::string& src) {
        CAPTURE(src);
        try {
            check(l, src);
            return false;
        } catch (const Error& e) {
            return e.code() == ErrorCode::not_compilable;
        }
    };
    CHECK_NOTHROW(check(Language::javascript, "const fs = require('fs');\nconst p = require(\"node:path\");\n"));
    CHECK(rejected(Language::javascript, "const _ = require('lodash');\n"));
    CHECK(rejected(Language::javascript, "function* g() {}\n"));
    CHECK_NOTHROW(check(Language::java, "import java.util.List;\npublic class H {\n"
                                        "  public static void main(String[] a) {}\n}\n"));
    CHECK(rejected(Language::java, "import com.acme.Widget;\npublic class H {\n  public static void main(String[] a) {}\n}\n"));
    CHECK(rejected(Language::java, "public class H {}\n"));
    CHECK_NOTHROW(check(Language::python, "import os, json\nfrom collections import deque\nprint(1)\n"));
    CHECK(rejected(Language::python, "import numpy\n"));
    CHECK(rejected(Language::python, "from . import sibling\n"));
    CHECK(rejected(Language::python, "def f(:\n"));
}

TEST_CASE("harness generation through the mock client") {
    const auto config = cwtest::exec_config("harness-gen");
    const auto cand = CandidateFile::make("acme/widgets", "src/w.js", Language::javascript,
                                          read_file(pipeline_fixture("loc20.js")));
    MockGenerationClient client;
    client.add_response(render_harness_prompt(cand), read_file(pipeline_fixture("harness/javascript.txt")));
    const auto inst = generate_harness(cand, client, "widgets_0000", config);
    CHECK(inst.program_id == "widgets_0000");
    CHECK(inst.repo == "acme/widgets");
    CHECK(inst.source.rfind("const path = require(\"path\");\n", 0) == 0);
    CHECK(inst.source.find("```") == std::string::npos);

    MockGenerationClient empty;
    try {
        generate_harness(cand, empty, "widgets_0000", config);
        FAIL("generated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::client_error);
    }

    MockGenerationClient bad;
    bad.add_response(render_harness_prompt(cand), "const _ = require('lodash');\n_.noop();\n");
    CHECK_THROWS_AS(generate_harness(cand, bad, "widgets_0000", config), Error);
}

TEST_CASE("split properties") {
    const auto instances = synthetic_instances(60);
    const auto a = split_corpus(instances, 0.2012, 11);
    const auto b = split_corpus(instances, 0.2012, 11);
    CHECK(a.assignments == b.assignments);
    CHECK(a.degenerate.empty());
    std::set<std::string> repos;
    for (const auto& s : a.assignments) CHECK(repos.insert(s.repo).second);
    CHECK(repos.size() == 180);

    std::map<std::string, Split> split_of;
    for (const auto& s : a.assignments) split_of[s.repo] = s.split;
    std::map<Language, std::pair<int, int>> counts;  // test, total
    for (const auto& inst : instances) {
        auto& c = counts[inst.language];
        c.first += split_of.at(inst.repo) == Split::test ? 1 : 0;
        ++c.second;
    }
    for (const auto& [lang, c] : counts) {
        CAPTURE(to_string(lang));
        CHECK(std::abs(c.first - 0.2012 * c.second) <= 2.0);
    }
    CHECK(split_corpus(instances, 0.2012, 12).assignments != a.assignments);
}

TEST_CASE("split errors and degenerate strata") {
    std::vector<ProgramInstance> one_repo;
    for (int i = 0; i < 100; ++i) one_repo.push_back(ProgramInstance::make(make_program_id("o/r", i), Language::java, "x\n", "o/r"));
    const auto r = split_corpus(one_repo, 0.2012, 1);
    CHECK(r.degenerate == std::vector<Language>{Language::java});
    REQUIRE(r.assignments.size() == 1);
    CHECK(r.assignments[0].split == Split::train);

    CHECK_THROWS_AS(split_corpus(one_repo, 0.0, 1), Error);
    CHECK_THROWS_AS(split_corpus(one_repo, 1.0, 1), Error);
    one_repo[3].repo.clear();
    CHECK_THROWS_AS(split_corpus(one_repo, 0.2, 1), Error);
}

TEST_CASE("corpus statistics") {
    auto py = [](const char* t) { return parse_qualified_name(t, Language::python); };
    const CallGraph g1(Language::python, "a", {{py("a.<toplevel>"), py("a.f")}, {py("a.f"), py("a.g")}},
                       {py("a.f"), py("a.g")});
    const CallGraph g2(Language::python, "b",
                       {{py("b.<toplevel>"), py("b.f")}, {py("b.f"), py("b.g")}, {py("b.g"), py("b.h")},
                        {py("b.h"), py("b.h")}},
                       {py("b.f"), py("b.g"), py("b.h"), py("b.k")});
    const std::vector<ProgramInstance> inst{
        ProgramInstance::make("a", Language::python, "1\n2\n3\n", "o/x", g1),
        ProgramInstance::make("b", Language::python, "1\n2\n3\n4\n5\n", "o/y", g2),
    };
    const auto stats = corpus_stats(inst, {{"o/x", Split::test}});
    const auto& s = stats.at(Language::python);
    CHECK(s.test_programs == 1);
    CHECK(s.train_programs == 0);
    CHECK(s.unassigned_programs == 1);
    CHECK(s.functions.mean == doctest::Approx(3.0));
    CHECK(s.functions.max == 4);
    CHECK(s.edges.mean == doctest::Approx(3.0));
    CHECK(s.edges.max == 4);
    CHECK(s.loc.mean == doctest::Approx(4.0));
    CHECK(s.loc.max == 5);

    const auto j = nlohmann::json::parse(serialize_stats(stats));
    CHECK(j["python"]["programs"]["test"] == 1);
    CHECK(j["python"]["loc_per_program"]["max"] == 5);
    const auto table = format_stats_table(stats);
    CHECK(table.find("Python") != std::string::npos);
    CHECK(table.find("LOC/program") != std::string::npos);

    auto bare = inst;
    bare[0].ground_truth.reset();
    CHECK_THROWS_AS(corpus_stats(bare, {}), Error);
    CHECK(corpus_stats(bare, {}, false).at(Language::python).functions.max == 4);
}

TEST_CASE("reasoning-trace prompt for an instance") {
    auto py = [](const char* t) { return parse_qualified_name(t, Language::python); };
    const CallGraph g(Language::python, "m", {{py("m.<toplevel>"), py("m.f")}}, {py("m.f")});
    const auto inst = ProgramInstance::make("m", Language::python, "def f():\n    pass\n\nf()\n", "o/r", g);
    const auto p = render_cot_prompt(inst);
    CHECK(p.find("1. Which functions does m.<toplevel> call?") != std::string::npos);
    CHECK(p.find("(use these as the correct answers):**\n1. m.f\n") != std::string::npos);
}
