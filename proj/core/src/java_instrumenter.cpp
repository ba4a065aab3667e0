#include "callwitness/java_instrumenter.hpp"

#include "java_parser.hpp"

namespace callwitness {

namespace {

// Appended to the compilation unit. Raw collections and an unbuffered
// stream keep it within what every supported compiler accepts; each line
// reaches the file before the next call, so System.exit loses nothing.
constexpr std::string_view kTracer = R"(
final class CallwitnessTracer {
    private static final java.util.ArrayList STACK = new java.util.ArrayList();
    private static java.io.FileOutputStream out;
    static {
        String path = System.getenv("CALLWITNESS_TRACE_OUT");
        if (path != null) {
            try {
                out = new java.io.FileOutputStream(path);
            } catch (java.io.IOException e) {
                out = null;
            }
        }
        put("CALLWITNESS\t1\tjava\n");
    }
    private static void put(String line) {
        if (out == null) return;
        try {
            out.write(line.getBytes("UTF-8"));
        } catch (java.io.IOException e) {
            out = null;
        }
    }
    static int enter(String callee) {
        String caller = STACK.isEmpty() ? "@TOP@" : (String) STACK.get(STACK.size() - 1);
        put("CALL\t" + caller + "\t" + callee + "\n");
        STACK.add(callee);
        return STACK.size() - 1;
    }
    static void exit(int depth) {
        while (STACK.size() > depth) STACK.remove(STACK.size() - 1);
    }
}
)";

}  // namespace

JavaMethodInventory parse_java_subset(std::string_view source) { return java::parse(source).inventory; }

InstrumentedSource instrument_java(std::string_view source) {
    auto parsed = java::parse(source);
    auto& inv = parsed.inventory;
    QualifiedName top = toplevel_name(Language::java, inv.main_class);

    std::vector<Insertion> ins;
    for (size_t k = 0; k < inv.methods.functions.size(); ++k) {
        const auto& fn = inv.methods.functions[k];
        const auto& body = parsed.bodies[k];
        const std::string enter = "int __cwD=CallwitnessTracer.enter(\"" + fn.name.text() + "\");try{";
        const std::string leave = "}finally{CallwitnessTracer.exit(__cwD);}";
        if (body.open == body.close) {
            ins.push_back({body.open, false, 0, enter + leave});
        } else {
            ins.push_back({body.open, false, 0, enter});
            ins.push_back({body.close, true, 0, leave});
        }
    }
    std::string tracer(kTracer);
    tracer.replace(tracer.find("@TOP@"), 5, top.text());
    if (!source.empty() && source.back() != '\n') tracer.insert(0, "\n");
    ins.push_back({source.size(), false, 0, std::move(tracer)});

    return InstrumentedSource{apply_insertions(source, std::move(ins)), std::move(inv.methods), 0, std::move(top)};
}

}  // namespace callwitness
