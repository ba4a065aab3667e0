#include "callwitness/schema.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

namespace callwitness {

namespace {

bool is_segment_char(unsigned char c) noexcept {
    return std::isalnum(c) != 0 || c == '_' || c == '$' || c == '#' || c >= 0x80;
}

bool is_valid_signature(std::string_view sig) noexcept {
    for (unsigned char c : sig) {
        if (c == '(' || c == ')' || c == ':' || std::isspace(c) != 0) return false;
    }
    return true;
}

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void malformed(std::string_view text, std::string_view why) {
    throw Error(ErrorCode::malformed_name, "'" + std::string(text) + "': " + std::string(why));
}

[[noreturn]] void schema(const std::string& why) { throw Error(ErrorCode::schema_violation, why); }

}  // namespace

std::string_view to_string(Language language) noexcept {
    switch (language) {
        case Language::python: return "python";
        case Language::javascript: return "javascript";
        case Language::java: return "java";
    }
    return "python";
}

Language parse_language(std::string_view tag) {
    if (tag == "python") return Language::python;
    if (tag == "javascript") return Language::javascript;
    if (tag == "java") return Language::java;
    schema("unknown language tag '" + std::string(tag) + "'");
}

std::string_view display_name(Language language) noexcept {
    switch (language) {
        case Language::python: return "Python";
        case Language::javascript: return "JavaScript";
        case Language::java: return "Java";
    }
    return "Python";
}

std::string_view source_extension(Language language) noexcept {
    switch (language) {
        case Language::python: return "py";
        case Language::javascript: return "js";
        case Language::java: return "java";
    }
    return "py";
}

bool is_valid_segment(std::string_view segment) noexcept {
    if (segment.empty()) return false;
    // synthetic members such as <init> and <toplevel>
    if (segment.size() > 2 && segment.front() == '<' && segment.back() == '>') {
        segment = segment.substr(1, segment.size() - 2);
    }
    return std::all_of(segment.begin(), segment.end(),
                       [](char c) { return is_segment_char(static_cast<unsigned char>(c)); });
}

QualifiedName::QualifiedName(Language language, std::vector<std::string> segments,
                             std::optional<std::string> signature)
    : language_(language), segments_(std::move(segments)), signature_(std::move(signature)) {
    if (segments_.empty()) throw Error(ErrorCode::malformed_name, "qualified name without segments");
    for (const auto& seg : segments_) {
        if (!is_valid_segment(seg)) {
            throw Error(ErrorCode::malformed_name, "illegal segment '" + seg + "'");
        }
    }
    if (language_ == Language::java) {
        if (segments_.size() < 2) {
            throw Error(ErrorCode::malformed_name, "java names need a class path and a member");
        }
        if (signature_ && !is_valid_signature(*signature_)) {
            throw Error(ErrorCode::malformed_name, "illegal signature '" + *signature_ + "'");
        }
        for (size_t i = 0; i + 1 < segments_.size(); ++i) {
            if (i > 0) text_ += '.';
            text_ += segments_[i];
        }
        text_ += ':';
        text_ += segments_.back();
        if (signature_) text_ += "(" + *signature_ + ")";
    } else {
        if (signature_) throw Error(ErrorCode::malformed_name, "signatures are java-only");
        for (size_t i = 0; i < segments_.size(); ++i) {
            if (i > 0) text_ += '.';
            text_ += segments_[i];
        }
    }
}

QualifiedName QualifiedName::without_signature() const {
    if (!signature_) return *this;
    return QualifiedName(language_, segments_);
}

QualifiedName parse_qualified_name(std::string_view raw, Language language) {
    const std::string_view text = trim(raw);
    if (text.empty()) malformed(raw, "empty name");

    if (language != Language::java) {
        if (text.find_first_of(":()") != std::string_view::npos) malformed(text, "illegal separator");
        auto segments = split(text, '.');
        for (const auto& seg : segments) {
            if (!is_valid_segment(seg)) malformed(text, "empty or illegal segment");
        }
        return QualifiedName(language, std::move(segments));
    }

    std::string_view head = text;
    std::optional<std::string> signature;
    if (head.back() == ')') {
        const size_t open = head.rfind('(');
        if (open == std::string_view::npos) malformed(text, "unbalanced signature");
        signature = std::string(head.substr(open + 1, head.size() - open - 2));
        head = head.substr(0, open);
        if (!is_valid_signature(*signature)) malformed(text, "illegal signature");
    }
    if (head.find_first_of("()") != std::string_view::npos) malformed(text, "illegal parenthesis");
    const size_t colon = head.find(':');
    if (colon == std::string_view::npos || head.find(':', colon + 1) != std::string_view::npos) {
        malformed(text, "java names need exactly one ':' before the member");
    }
    auto segments = split(head.substr(0, colon), '.');
    segments.emplace_back(head.substr(colon + 1));
    for (const auto& seg : segments) {
        if (!is_valid_segment(seg)) malformed(text, "empty or illegal segment");
    }
    return QualifiedName(language, std::move(segments), std::move(signature));
}

QualifiedName toplevel_name(Language language, std::string_view scope) {
    auto segments = split(scope, '.');
    segments.emplace_back(kToplevelMember);
    return QualifiedName(language, std::move(segments));
}

CallEdge::CallEdge(QualifiedName caller_name, QualifiedName callee_name)
    : caller(std::move(caller_name)), callee(std::move(callee_name)) {
    if (caller.language() != callee.language()) {
        throw Error(ErrorCode::language_mismatch, "edge endpoints from different languages: " +
                                                      caller.text() + " -> " + callee.text());
    }
}

CallGraph::CallGraph(Language language, std::string program_id, EdgeSet edges, NameSet functions)
    : language_(language),
      program_id_(std::move(program_id)),
      edges_(std::move(edges)),
      functions_(std::move(functions)) {
    for (const auto& fn : functions_) {
        if (fn.language() != language_) schema("function '" + fn.text() + "' has the wrong language");
        if (fn.is_toplevel()) schema("the synthetic top-level caller is not an inventory function");
    }
    auto check_endpoint = [&](const QualifiedName& name) {
        if (name.language() != language_) schema("edge endpoint '" + name.text() + "' has the wrong language");
        if (name.is_toplevel()) return;
        const bool in_module = language_ == Language::java || name.segments().front() == program_id_;
        if (in_module && !functions_.contains(name)) {
            schema("edge endpoint '" + name.text() + "' is not in the function inventory");
        }
    };
    for (const auto& edge : edges_) {
        check_endpoint(edge.caller);
        check_endpoint(edge.callee);
    }
}

std::vector<QualifiedName> CallGraph::callers() const {
    std::vector<QualifiedName> out;
    for (const auto& edge : edges_) {
        if (out.empty() || out.back() != edge.caller) out.push_back(edge.caller);
    }
    return out;
}

std::vector<QualifiedName> CallGraph::callees_of(const QualifiedName& caller) const {
    std::vector<QualifiedName> out;
    for (const auto& edge : edges_) {
        if (edge.caller == caller) out.push_back(edge.callee);
    }
    return out;
}

std::string serialize_callgraph(const CallGraph& graph) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["program_id"] = graph.program_id();
    doc["language"] = std::string(to_string(graph.language()));
    auto functions = nlohmann::ordered_json::array();
    for (const auto& fn : graph.functions()) functions.push_back(fn.text());
    doc["functions"] = std::move(functions);

    // std::set orders by canonical text already, which is the byte order we want
    std::map<std::string, std::vector<std::string>> by_caller;
    for (const auto& edge : graph.edges()) by_caller[edge.caller.text()].push_back(edge.callee.text());
    auto edges = nlohmann::ordered_json::object();
    for (auto& [caller, callees] : by_caller) {
        std::sort(callees.begin(), callees.end());
        edges[caller] = callees;
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

CallGraph deserialize_callgraph(std::string_view data) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(data);
    } catch (const nlohmann::json::exception& e) {
        schema(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema("top level must be an object");
    for (const char* key : {"schema_version", "program_id", "language", "functions", "edges"}) {
        if (!doc.contains(key)) schema(std::string("missing field '") + key + "'");
    }
    if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != 1) {
        schema("unsupported schema_version");
    }
    if (!doc["program_id"].is_string()) schema("program_id must be a string");
    if (!doc["language"].is_string()) schema("language must be a string");
    const Language language = parse_language(doc["language"].get<std::string>());

    auto parse_name = [&](const nlohmann::json& v) {
        if (!v.is_string()) schema("names must be strings");
        try {
            return parse_qualified_name(v.get<std::string>(), language);
        } catch (const Error& e) {
            schema(std::string("bad name: ") + e.what());
        }
    };

    if (!doc["functions"].is_array()) schema("functions must be an array");
    NameSet functions;
    for (const auto& v : doc["functions"]) {
        if (!functions.insert(parse_name(v)).second) schema("duplicate function " + v.dump());
    }

    if (!doc["edges"].is_object()) schema("edges must be an object");
    EdgeSet edges;
    for (const auto& [caller_text, callees] : doc["edges"].items()) {
        const QualifiedName caller = parse_name(nlohmann::json(caller_text));
        if (!callees.is_array()) schema("callee list of '" + caller_text + "' must be an array");
        for (const auto& c : callees) {
            if (!edges.emplace(caller, parse_name(c)).second) {
                schema("duplicate callee " + c.dump() + " under '" + caller_text + "'");
            }
        }
    }
    return CallGraph(language, doc["program_id"].get<std::string>(), std::move(edges), std::move(functions));
}

EdgeDiff edge_diff(const EdgeSet& predicted, const EdgeSet& gold) {
    EdgeDiff diff;
    std::set_intersection(predicted.begin(), predicted.end(), gold.begin(), gold.end(),
                          std::inserter(diff.tp, diff.tp.end()));
    std::set_difference(predicted.begin(), predicted.end(), gold.begin(), gold.end(),
                        std::inserter(diff.fp, diff.fp.end()));
    std::set_difference(gold.begin(), gold.end(), predicted.begin(), predicted.end(),
                        std::inserter(diff.fn, diff.fn.end()));
    return diff;
}

EdgeDiff edge_diff(const CallGraph& predicted, const CallGraph& gold) {
    if (predicted.language() != gold.language()) {
        throw Error(ErrorCode::language_mismatch, "predicted graph is " + std::string(to_string(predicted.language())) +
                                                      ", gold graph is " + std::string(to_string(gold.language())));
    }
    return edge_diff(predicted.edges(), gold.edges());
}

int count_loc(std::string_view source) noexcept {
    int count = 0;
    bool content = false;
    for (char c : source) {
        if (c == '\n') {
            count += content ? 1 : 0;
            content = false;
        } else if (std::isspace(static_cast<unsigned char>(c)) == 0) {
            content = true;
        }
    }
    return count + (content ? 1 : 0);
}

ProgramInstance ProgramInstance::make(std::string program_id, Language language, std::string source,
                                      std::string repo, std::optional<CallGraph> ground_truth) {
    ProgramInstance inst{std::move(program_id), language, std::move(source), std::move(repo), 0,
                         std::move(ground_truth)};
    inst.loc = count_loc(inst.source);
    return inst;
}

std::string module_name_for(const ProgramInstance& instance) { return instance.program_id; }

std::string_view to_string(Split split) noexcept { return split == Split::test ? "test" : "train"; }

Split parse_split(std::string_view tag) {
    if (tag == "test") return Split::test;
    if (tag == "train") return Split::train;
    throw Error(ErrorCode::schema_violation, "unknown split '" + std::string(tag) + "'");
}

std::string make_program_id(std::string_view repo_slug, int index) {
    std::string_view short_name = repo_slug;
    if (auto slash = short_name.rfind('/'); slash != std::string_view::npos) short_name.remove_prefix(slash + 1);
    std::string id;
    for (char c : short_name) id += (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_') ? c : '_';
    if (id.empty()) id = "repo";
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%04d", index);
    return id + suffix;
}

}  // namespace callwitness
