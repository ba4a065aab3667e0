#include <doctest.h>

#include "test_support.hpp"

#include <callwitness/java_instrumenter.hpp>
#include <callwitness/process.hpp>

using namespace callwitness;

namespace {

std::vector<std::string> names_of(const FunctionInventory& inv) {
    std::vector<std::string> out;
    for (const auto& f : inv.functions) out.push_back(f.name.text());
    return out;
}

void expect_error(const std::string& source, ErrorCode code, int line = -1) {
    CAPTURE(source);
    try {
        parse_java_subset(source);
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == code);
        if (line >= 0) CHECK(e.line() == line);
    }
}

const char* kMain = "  public static void main(String[] args) {}\n";

}  // namespace

TEST_CASE("inventory with erased signatures and nested classes") {
    const std::string src =
        "package demo.app;\n"
        "import java.util.*;\n"
        "public class Main {\n"
        "  static class Inner {\n"
        "    Inner(String s) {}\n"
        "    int run(java.util.List<String> xs, int... rest) { return 0; }\n"
        "  }\n"
        "  interface Shape { int area(); }\n"
        "  abstract static class Base { abstract void f(); void g(Map<String, int[]> m) {} }\n"
        "  private final int[][] grid = new int[2][2];\n"
        "  Main() { this(1); }\n"
        "  Main(int x) {}\n"
        + std::string(kMain) + "}\n";
    const auto inv = parse_java_subset(src);
    CHECK(names_of(inv.methods) ==
          std::vector<std::string>{"Main.Inner:<init>(String)", "Main.Inner:run(List,int[])",
                                   "Main.Base:g(Map)", "Main:<init>()", "Main:<init>(int)",
                                   "Main:main(String[])"});
    CHECK(inv.package_name == "demo.app");
    CHECK(inv.main_class == "Main");
    CHECK(inv.main_binary_name == "demo.app.Main");
    CHECK(inv.public_class == "Main");
    CHECK(inv.imports == std::vector<std::string>{"java.util.*"});
    CHECK(inv.methods.functions[0].owner_class == "Main.Inner");
    CHECK(inv.methods.functions[0].kind == FunctionKind::constructor);
    CHECK(inv.methods.functions[5].kind == FunctionKind::static_method);
}

TEST_CASE("main in a nested class launches through the binary name") {
    const auto inv = parse_java_subset("class Outer {\n  static class App {\n" + std::string(kMain) + "  }\n}\n");
    CHECK(inv.main_class == "Outer.App");
    CHECK(inv.main_binary_name == "Outer$App");
    CHECK(inv.public_class.empty());
}

TEST_CASE("missing entry point") {
    expect_error("public class A {\n  void f() {}\n}\n", ErrorCode::missing_entry_point);
    expect_error("public class A {\n  static void main(String[] args) {}\n}\n", ErrorCode::missing_entry_point);
}

TEST_CASE("constructs outside the subset name their line") {
    const std::string tail = kMain + std::string("}\n");
    expect_error("public class A {\n  Runnable r = () -> {};\n" + tail, ErrorCode::unsupported_construct, 2);
    expect_error("public class A {\n  Object o = new Object() {\n    public String toString() { return \"\"; }\n  };\n" +
                     tail,
                 ErrorCode::unsupported_construct, 2);
    expect_error("public class A {\n  static <T> T id(T t) { return t; }\n" + tail, ErrorCode::unsupported_construct,
                 2);
    expect_error("public class A {\n\n  void f() { java.util.function.Function g = String::valueOf; }\n" + tail,
                 ErrorCode::unsupported_construct, 3);
    expect_error("record P(int x) {}\npublic class A {\n" + tail, ErrorCode::unsupported_construct, 1);
}

TEST_CASE("strip_probes inverts instrumentation on every mini-corpus program") {
    for (const auto& f : cwtest::minicorpus(Language::java)) {
        CAPTURE(f.name);
        const std::string src = read_file(f.source);
        const auto out = instrument_java(src);
        CHECK(contains_probes(out.text));
        CHECK(strip_probes(out.text) == src);
        CHECK(out.text.find(kJavaTracerClass) != std::string::npos);
        CHECK(out.toplevel.text() == f.name + ":<toplevel>");
        CHECK(out.inventory.names() == parse_java_subset(src).methods.names());
    }
}

TEST_CASE("constructor probes follow an explicit this() or super() call") {
    const std::string src = "public class P {\n  P() { this(0); }\n  P(int x) { super(); }\n" + std::string(kMain) +
                            "}\n";
    const auto out = instrument_java(src);
    const auto first = out.text.find("this(0);");
    REQUIRE(first != std::string::npos);
    CHECK(out.text.find(std::string(kProbeOpen)) > first);
}
