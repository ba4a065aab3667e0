#include "callwitness/python_support.hpp"

#include "callwitness/error.hpp"
#include "callwitness/process.hpp"

#include <atomic>
#include <sstream>

#include <unistd.h>

namespace callwitness {

namespace fs = std::filesystem;

namespace {

constexpr const char* kInventoryScript = R"PY(
import ast, sys
path, mod = sys.argv[1], sys.argv[2]
try:
    tree = ast.parse(open(path, encoding="utf-8").read(), path)
except SyntaxError as e:
    print("ERROR\t%s\t%s" % (e.lineno or 0, e.msg))
    sys.exit(0)
seen = set()
def walk(node, prefix):
    for child in ast.iter_child_nodes(node):
        if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef)):
            q = prefix + [child.name]
            name = ".".join(q)
            if name not in seen:
                seen.add(name)
                kind = "method" if isinstance(node, ast.ClassDef) else "function"
                print("%d\t%d\t%s\t%s" % (child.lineno, getattr(child, "end_lineno", child.lineno), kind, name))
            walk(child, q)
        elif isinstance(child, ast.ClassDef):
            walk(child, prefix + [child.name])
        else:
            walk(child, prefix)
walk(tree, [mod])
)PY";

constexpr const char* kHarnessCheckScript = R"PY(
import ast, sys
path = sys.argv[1]
try:
    tree = ast.parse(open(path, encoding="utf-8").read(), path)
except SyntaxError as e:
    print("syntax error at line %s: %s" % (e.lineno, e.msg))
    sys.exit(0)
stdlib = set(getattr(sys, "stdlib_module_names", ())) | set(sys.builtin_module_names) | {"__future__"}
for node in ast.walk(tree):
    names = []
    if isinstance(node, ast.Import):
        names = [a.name for a in node.names]
    elif isinstance(node, ast.ImportFrom):
        if node.level:
            print("relative import at line %d" % node.lineno)
            sys.exit(0)
        names = [node.module or ""]
    for n in names:
        if n.split(".")[0] not in stdlib:
            print("unresolved import '%s' at line %d" % (n, node.lineno))
            sys.exit(0)
print("OK")
)PY";

std::string run_script(const char* script, std::string_view source, const std::vector<std::string>& extra,
                       const fs::path& python, const fs::path& scratch_dir, double timeout_s) {
    static std::atomic<unsigned> counter{0};
    const fs::path dir = scratch_dir / ("pycheck-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(dir);
    const fs::path target = dir / "target.py";
    write_file(target, source);
    ProcessSpec spec;
    spec.argv = {python.string(), "-I", "-c", script, target.string()};
    spec.argv.insert(spec.argv.end(), extra.begin(), extra.end());
    spec.cwd = dir;
    spec.stdout_path = dir / "out.txt";
    spec.stderr_path = dir / "err.txt";
    spec.timeout_s = timeout_s;
    const auto result = run_process(spec);
    std::string out = read_file(spec.stdout_path);
    const std::string err = read_file(spec.stderr_path);
    fs::remove_all(dir);
    if (result.timed_out || result.exit_status != 0) {
        throw Error(ErrorCode::toolchain_missing, "python helper failed under " + python.string() + ": " + err);
    }
    return out;
}

}  // namespace

FunctionInventory python_inventory(std::string_view source, std::string_view module_name, const fs::path& python,
                                   const fs::path& scratch_dir, double timeout_s) {
    const std::string out =
        run_script(kInventoryScript, source, {std::string(module_name)}, python, scratch_dir, timeout_s);
    FunctionInventory inv;
    std::istringstream lines(out);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::istringstream f(line);
        std::string a, b, kind, name;
        std::getline(f, a, '\t');
        std::getline(f, b, '\t');
        if (a == "ERROR") {
            std::getline(f, kind);
            throw Error(ErrorCode::not_compilable, "syntax error: " + kind, std::stoi(b));
        }
        std::getline(f, kind, '\t');
        std::getline(f, name);
        inv.functions.push_back(FunctionEntry{
            parse_qualified_name(name, Language::python),
            kind == "method" ? FunctionKind::class_method : FunctionKind::function_decl,
            {std::stoi(a), std::stoi(b)},
            {}});
    }
    return inv;
}

void python_check_harness(std::string_view source, const fs::path& python, const fs::path& scratch_dir,
                          double timeout_s) {
    std::string out = run_script(kHarnessCheckScript, source, {}, python, scratch_dir, timeout_s);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    if (out != "OK") throw Error(ErrorCode::not_compilable, out);
}

}  // namespace callwitness
