#include <callwitness/java_instrumenter.hpp>
#include <callwitness/js_instrumenter.hpp>
#include <callwitness/prompts.hpp>
#include <callwitness/scorer.hpp>

#include <benchmark/benchmark.h>

#include <string>

using namespace callwitness;

namespace {

std::string js_program(int functions) {
    std::string s;
    for (int i = 0; i < functions; ++i) {
        s += "function f" + std::to_string(i) + "(x) {\n";
        if (i > 0) s += "  return f" + std::to_string(i - 1) + "(x) + 1;\n";
        else s += "  return x;\n";
        s += "}\n";
        s += "class C" + std::to_string(i) + " {\n  constructor(v) { this.v = v; }\n  get() { return this.v; }\n}\n";
    }
    s += "console.log(f" + std::to_string(functions - 1) + "(0));\n";
    return s;
}

std::string java_program(int methods) {
    std::string s = "import java.util.*;\n\npublic class Main {\n";
    for (int i = 0; i < methods; ++i) {
        s += "    static int m" + std::to_string(i) + "(int x, String[] names) {\n";
        s += i > 0 ? "        return m" + std::to_string(i - 1) + "(x, names) + 1;\n" : "        return x;\n";
        s += "    }\n";
    }
    s += "    public static void main(String[] args) {\n        System.out.println(m" + std::to_string(methods - 1) +
         "(0, args));\n    }\n}\n";
    return s;
}

CallGraph chain_graph(int n) {
    NameSet fns;
    EdgeSet edges;
    const auto name = [](int i) { return parse_qualified_name("mod.f" + std::to_string(i), Language::python); };
    for (int i = 0; i < n; ++i) fns.insert(name(i));
    edges.emplace(toplevel_name(Language::python, "mod"), name(n - 1));
    for (int i = 1; i < n; ++i) {
        edges.emplace(name(i), name(i - 1));
        edges.emplace(name(i), name(0));
    }
    return CallGraph(Language::python, "mod", edges, fns);
}

void BM_InstrumentJs(benchmark::State& state) {
    const std::string src = js_program(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(instrument_js(src, "bench"));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_InstrumentJs)->Arg(10)->Arg(100)->Arg(1000);

void BM_InstrumentJava(benchmark::State& state) {
    const std::string src = java_program(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(instrument_java(src));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_InstrumentJava)->Arg(10)->Arg(100)->Arg(1000);

void BM_ParseAnswer(benchmark::State& state) {
    const auto graph = chain_graph(static_cast<int>(state.range(0)));
    const auto callers = question_callers(graph);
    const std::string block = "Sure, here you go:\n" + render_answer_block(graph, callers);
    for (auto _ : state) benchmark::DoNotOptimize(parse_answer(block, callers, Language::python));
}
BENCHMARK(BM_ParseAnswer)->Arg(10)->Arg(100)->Arg(1000);

void BM_SerializeCallgraph(benchmark::State& state) {
    const auto graph = chain_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serialize_callgraph(graph));
}
BENCHMARK(BM_SerializeCallgraph)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
