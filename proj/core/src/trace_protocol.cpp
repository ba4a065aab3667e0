#include "callwitness/trace_protocol.hpp"

namespace callwitness {

std::string format_trace_header(Language language) {
    return "CALLWITNESS\t" + std::to_string(kTraceProtocolVersion) + "\t" + std::string(to_string(language)) + "\n";
}

std::string format_trace_call(std::string_view caller, std::string_view callee) {
    std::string line = "CALL\t";
    line.append(caller);
    line += '\t';
    line.append(callee);
    line += '\n';
    return line;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        const size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) return out;
        start = tab + 1;
    }
}

}  // namespace

ParsedTrace parse_trace(std::string_view data) {
    ParsedTrace out;
    size_t pos = 0;
    int line_no = 0;
    while (pos < data.size()) {
        const size_t nl = data.find('\n', pos);
        ++line_no;
        if (nl == std::string_view::npos) {
            out.error = "line " + std::to_string(line_no) + " is not newline-terminated";
            return out;
        }
        const std::string_view line = data.substr(pos, nl - pos);
        pos = nl + 1;
        const auto f = fields(line);
        if (line_no == 1) {
            if (f.size() != 3 || f[0] != "CALLWITNESS" || f[1] != std::to_string(kTraceProtocolVersion)) {
                out.error = "missing or malformed trace header";
                return out;
            }
            try {
                out.language = parse_language(f[2]);
            } catch (const Error&) {
                out.error = "unknown language in trace header";
                return out;
            }
            continue;
        }
        if (f.size() != 3 || f[0] != "CALL" || f[1].empty() || f[2].empty()) {
            out.error = "malformed line " + std::to_string(line_no);
            return out;
        }
        out.calls.emplace_back(std::string(f[1]), std::string(f[2]));
    }
    if (line_no == 0) out.error = "empty trace";
    return out;
}

}  // namespace callwitness
