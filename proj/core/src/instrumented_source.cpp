#include "callwitness/instrumented_source.hpp"

#include <algorithm>
#include <tuple>

namespace callwitness {

std::string_view to_string(FunctionKind kind) noexcept {
    switch (kind) {
        case FunctionKind::function_decl: return "function_decl";
        case FunctionKind::arrow_const: return "arrow_const";
        case FunctionKind::class_method: return "class_method";
        case FunctionKind::class_constructor: return "class_constructor";
        case FunctionKind::static_method: return "static_method";
        case FunctionKind::instance_method: return "instance_method";
        case FunctionKind::constructor: return "constructor";
    }
    return "function_decl";
}

NameSet FunctionInventory::names() const {
    NameSet out;
    for (const auto& fn : functions) out.insert(fn.name);
    return out;
}

const FunctionEntry* FunctionInventory::find(const QualifiedName& name) const {
    for (const auto& fn : functions) {
        if (fn.name == name) return &fn;
    }
    return nullptr;
}

bool contains_probes(std::string_view text) noexcept {
    return text.find(kProbeOpen) != std::string_view::npos || text.find(kProbeClose) != std::string_view::npos;
}

std::string strip_probes(std::string_view instrumented) {
    std::string out;
    out.reserve(instrumented.size());
    size_t pos = 0;
    while (pos < instrumented.size()) {
        const size_t open = instrumented.find(kProbeOpen, pos);
        if (open == std::string_view::npos) {
            out.append(instrumented.substr(pos));
            break;
        }
        out.append(instrumented.substr(pos, open - pos));
        const size_t close = instrumented.find(kProbeClose, open + kProbeOpen.size());
        if (close == std::string_view::npos) break;
        pos = close + kProbeClose.size();
    }
    return out;
}

std::string apply_insertions(std::string_view source, std::vector<Insertion> insertions) {
    auto key = [](const Insertion& ins) {
        // closers: deeper first; openers: shallower first
        return std::make_tuple(ins.offset, ins.closer ? 0 : 1, ins.closer ? -ins.depth : ins.depth);
    };
    std::stable_sort(insertions.begin(), insertions.end(),
                     [&](const Insertion& a, const Insertion& b) { return key(a) < key(b); });
    std::string out;
    size_t total = source.size();
    for (const auto& ins : insertions) total += ins.text.size() + kProbeOpen.size() + kProbeClose.size();
    out.reserve(total);
    size_t pos = 0;
    for (const auto& ins : insertions) {
        out.append(source.substr(pos, ins.offset - pos));
        pos = ins.offset;
        out.append(kProbeOpen);
        out.append(ins.text);
        out.append(kProbeClose);
    }
    out.append(source.substr(pos));
    return out;
}

}  // namespace callwitness
