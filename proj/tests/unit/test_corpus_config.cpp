#include <doctest.h>

#include "test_support.hpp"

#include <callwitness/config.hpp>
#include <callwitness/corpus.hpp>
#include <callwitness/process.hpp>

using namespace callwitness;
namespace fs = std::filesystem;

namespace {

QualifiedName js(const char* t) { return parse_qualified_name(t, Language::javascript); }

}  // namespace

TEST_CASE("instance round trip") {
    const auto root = cwtest::fresh_dir("corpus-rt");
    const auto inst = ProgramInstance::make("widgets_0001", Language::javascript, "function f() {}\nf();\n", "acme/widgets");
    const InstanceMeta meta{"widgets_0001", Language::javascript, "acme/widgets", "MIT", 321, "lib/w.js"};
    const auto dir = write_instance(root, inst, meta);
    CHECK(dir == root / "javascript" / "widgets_0001");
    CHECK(fs::is_regular_file(dir / "program.js"));
    CHECK(is_instance_dir(dir));
    CHECK_FALSE(is_instance_dir(root));

    const auto loaded = load_instance(dir);
    CHECK(loaded.program_id == "widgets_0001");
    CHECK(loaded.source == inst.source);
    CHECK(loaded.repo == "acme/widgets");
    CHECK(loaded.loc == 2);
    CHECK_FALSE(loaded.ground_truth);

    const auto m = load_meta(dir);
    CHECK(m.license == "MIT");
    CHECK(m.stars == 321);
    CHECK(m.source_path == "lib/w.js");
    CHECK(serialize_meta(m) == serialize_meta(meta));

    const CallGraph g(Language::javascript, "widgets_0001", {{js("widgets_0001.<toplevel>"), js("widgets_0001.f")}},
                      {js("widgets_0001.f")});
    write_file(dir / "callgraph.json", serialize_callgraph(g));
    REQUIRE(load_instance(dir).ground_truth);
    CHECK(*load_instance(dir).ground_truth == g);

    const CallGraph other(Language::javascript, "someone_else", {}, {});
    write_file(dir / "callgraph.json", serialize_callgraph(other));
    CHECK_THROWS_AS(load_instance(dir), Error);
}

TEST_CASE("listing instances") {
    const auto root = cwtest::fresh_dir("corpus-list");
    for (const char* id : {"b_0000", "a_0000"}) {
        write_instance(root, ProgramInstance::make(id, Language::java, "class A {}\n", "o/r"),
                       InstanceMeta{id, Language::java, "o/r", "MIT", 1, "A.java"});
    }
    write_instance(root, ProgramInstance::make("c_0000", Language::python, "x = 1\n", "o/r"),
                   InstanceMeta{"c_0000", Language::python, "o/r", "MIT", 1, "c.py"});
    fs::create_directories(root / "java" / "not_an_instance");
    const auto all = list_instances(root);
    REQUIRE(all.size() == 3);
    CHECK(all[0].filename() == "c_0000");
    CHECK(all[1].filename() == "a_0000");
    CHECK(all[2].filename() == "b_0000");
    CHECK(list_instances(root, Language::javascript).empty());
    CHECK(list_instances(root, Language::java).size() == 2);
}

TEST_CASE("bad meta.json") {
    const auto dir = cwtest::fresh_dir("corpus-bad");
    write_file(dir / "meta.json", "{\"language\": \"java\"}");
    CHECK_THROWS_AS(load_meta(dir), Error);
}

TEST_CASE("splits.json") {
    const std::vector<SplitAssignment> s{{"z/z", Split::train}, {"a/a", Split::test}};
    const auto text = serialize_splits(s);
    CHECK(text == "{\n  \"a/a\": \"test\",\n  \"z/z\": \"train\"\n}\n");
    const auto back = deserialize_splits(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == SplitAssignment{"a/a", Split::test});
    CHECK_THROWS_AS(deserialize_splits("[]"), Error);
    CHECK_THROWS_AS(deserialize_splits("{\"a/a\": \"dev\"}"), Error);
}

TEST_CASE("settings") {
    const auto s = parse_settings(R"({
        "toolchain": {"node": "/usr/bin/node", "java": "jdk/bin/java"},
        "timeout_s": 5.5, "workers": 3, "seed": 42, "work_dir": "work",
        "per_repo_cap": 10, "test_fraction": 0.25, "pooling": "macro",
        "generator": {"kind": "mock", "mock_file": "mock.json"}
    })",
                                  "/etc/cw");
    CHECK(s.exec.node == "/usr/bin/node");
    CHECK(s.exec.java == "/etc/cw/jdk/bin/java");
    CHECK(s.exec.javac.empty());
    CHECK(s.exec.timeout_s == 5.5);
    CHECK(s.exec.workers == 3);
    CHECK(s.exec.seed == 42);
    CHECK(s.exec.work_dir == "/etc/cw/work");
    CHECK(s.per_repo_cap == 10);
    CHECK(s.test_fraction == 0.25);
    CHECK(s.pooling == Pooling::macro);
    CHECK(s.generator.mock_file == "/etc/cw/mock.json");

    const auto d = parse_settings("{}", "/");
    CHECK(d.per_repo_cap == kDefaultPerRepoCap);
    CHECK(d.test_fraction == kDefaultTestFraction);
    CHECK(d.pooling == Pooling::micro);
    CHECK(d.generator.kind == "mock");
}

TEST_CASE("settings errors") {
    for (const char* bad : {"{\"tiemout_s\": 1}", "{\"toolchain\": {\"ruby\": \"/x\"}}", "{\"timeout_s\": \"fast\"}",
                            "{\"timeout_s\": 0}", "{\"workers\": 0}", "{\"pooling\": \"weighted\"}",
                            "{\"generator\": {\"kind\": \"oracle\"}}", "[1]", "not json"}) {
        CAPTURE(bad);
        try {
            parse_settings(bad, "/");
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_argument);
        }
    }
}

TEST_CASE("settings file resolves against its directory") {
    const auto dir = cwtest::fresh_dir("settings-file");
    write_file(dir / "cw.json", "{\"toolchain\": {\"pytrace\": \"bin/pytrace\"}}");
    CHECK(load_settings(dir / "cw.json").exec.pytrace == dir / "bin" / "pytrace");
    CHECK_THROWS_AS(load_settings(dir / "missing.json"), Error);
}
