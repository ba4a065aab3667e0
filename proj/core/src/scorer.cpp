#include "callwitness/scorer.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>

namespace callwitness {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
    return s;
}

// Accepts "3.", "3)", "**3.**" at the start of a line; returns the index and
// the remainder after the marker, or -1.
int numbered(std::string_view line, std::string_view& rest) {
    line = trim(line);
    while (line.starts_with("*")) line.remove_prefix(1);
    size_t i = 0;
    int n = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])) != 0 && i < 6) {
        n = n * 10 + (line[i] - '0');
        ++i;
    }
    if (i == 0 || i == line.size() || (line[i] != '.' && line[i] != ')')) return -1;
    ++i;
    while (i < line.size() && line[i] == '*') ++i;
    rest = line.substr(i);
    // "3.5" is a number, not an answer line
    if (!rest.empty() && std::isdigit(static_cast<unsigned char>(rest.front())) != 0) return -1;
    return n;
}

std::string_view clean_name(std::string_view raw, Language language) {
    std::string_view s = trim(raw);
    auto strip_pair = [&](char open, char close) {
        while (s.size() >= 2 && s.front() == open && s.back() == close) s = trim(s.substr(1, s.size() - 2));
    };
    strip_pair('`', '`');
    strip_pair('"', '"');
    strip_pair('\'', '\'');
    strip_pair('`', '`');
    if (language != Language::java && s.ends_with("()")) s.remove_suffix(2);
    return trim(s);
}

bool is_none(std::string_view s) {
    if (s == "-" || s.empty()) return true;
    std::string lower;
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower == "none" || lower == "(none)" || lower == "n/a";
}

QualifiedName comparable(const QualifiedName& name) {
    return name.language() == Language::java ? name.without_signature() : name;
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    return j;
}

}  // namespace

double f1_score(double precision, double recall) noexcept {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

Metrics Metrics::from_counts(long tp, long fp, long fn) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    return m;
}

Metrics Metrics::from_values(double precision, double recall, double f1) {
    Metrics m;
    m.precision = precision;
    m.recall = recall;
    m.f1 = f1;
    return m;
}

AnswerSheet parse_answer(std::string_view text, const std::vector<QualifiedName>& callers, Language language,
                         std::string program_id) {
    AnswerSheet sheet;
    sheet.program_id = std::move(program_id);
    const int k = static_cast<int>(callers.size());
    for (int i = 1; i <= k; ++i) sheet.per_caller[i];

    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;

        std::string_view rest;
        const int index = numbered(line, rest);
        if (index < 0) continue;
        if (index < 1 || index > k) {
            ++sheet.dropped;
            continue;
        }
        NameSet& names = sheet.per_caller[index];
        size_t start = 0;
        while (start <= rest.size()) {
            size_t comma = rest.find(',', start);
            if (comma == std::string_view::npos) comma = rest.size();
            const std::string_view item = clean_name(rest.substr(start, comma - start), language);
            start = comma + 1;
            if (is_none(item)) continue;
            try {
                names.insert(parse_qualified_name(item, language));
            } catch (const Error&) {
                ++sheet.dropped;
            }
        }
    }
    return sheet;
}

EdgeSet predicted_edges(const AnswerSheet& answers, const std::vector<QualifiedName>& callers) {
    EdgeSet out;
    for (const auto& [index, names] : answers.per_caller) {
        if (index < 1 || index > static_cast<int>(callers.size())) {
            throw Error(ErrorCode::invalid_argument, "answer index " + std::to_string(index) + " has no question");
        }
        const QualifiedName caller = comparable(callers[static_cast<size_t>(index - 1)]);
        for (const auto& callee : names) out.emplace(caller, comparable(callee));
    }
    return out;
}

Metrics score_program(const AnswerSheet& answers, const CallGraph& gold, const std::vector<QualifiedName>& callers) {
    for (const auto& c : callers) {
        if (c.language() != gold.language()) throw Error(ErrorCode::language_mismatch, "caller " + c.text());
    }
    const EdgeSet predicted = predicted_edges(answers, callers);
    EdgeSet expected;
    for (const auto& e : gold.edges()) expected.emplace(comparable(e.caller), comparable(e.callee));
    const EdgeDiff diff = edge_diff(predicted, expected);
    return Metrics::from_counts(static_cast<long>(diff.tp.size()), static_cast<long>(diff.fp.size()),
                                static_cast<long>(diff.fn.size()));
}

std::string_view to_string(Pooling pooling) noexcept { return pooling == Pooling::micro ? "micro" : "macro"; }

Pooling parse_pooling(std::string_view tag) {
    if (tag == "micro") return Pooling::micro;
    if (tag == "macro") return Pooling::macro;
    throw Error(ErrorCode::invalid_argument, "pooling must be micro or macro, got '" + std::string(tag) + "'");
}

Metrics mean_metrics(const std::vector<Metrics>& values) {
    if (values.empty()) throw Error(ErrorCode::empty_input, "nothing to average");
    Metrics m;
    for (const auto& v : values) {
        m.tp += v.tp;
        m.fp += v.fp;
        m.fn += v.fn;
        m.precision += v.precision;
        m.recall += v.recall;
        m.f1 += v.f1;
    }
    const auto n = static_cast<double>(values.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    return m;
}

Aggregate aggregate(const std::vector<std::pair<Language, Metrics>>& per_program, Pooling pooling) {
    if (per_program.empty()) throw Error(ErrorCode::empty_input, "no program scores to aggregate");
    std::map<Language, std::vector<Metrics>> groups;
    for (const auto& [lang, m] : per_program) groups[lang].push_back(m);

    Aggregate out;
    std::vector<Metrics> languages;
    for (const auto& [lang, list] : groups) {
        Metrics m;
        if (pooling == Pooling::micro) {
            long tp = 0, fp = 0, fn = 0;
            for (const auto& x : list) {
                tp += x.tp;
                fp += x.fp;
                fn += x.fn;
            }
            m = Metrics::from_counts(tp, fp, fn);
        } else {
            m = mean_metrics(list);
        }
        out.per_language[lang] = m;
        languages.push_back(m);
    }
    out.overall = mean_metrics(languages);
    return out;
}

std::string serialize_scores(const std::vector<ProgramScore>& programs, const Aggregate& totals, Pooling pooling) {
    nlohmann::ordered_json j;
    j["pooling"] = to_string(pooling);
    j["overall"] = metrics_json(totals.overall);
    nlohmann::ordered_json langs = nlohmann::ordered_json::object();
    for (const auto& [lang, m] : totals.per_language) langs[std::string(to_string(lang))] = metrics_json(m);
    j["per_language"] = langs;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& p : programs) {
        nlohmann::ordered_json jp;
        jp["program_id"] = p.program_id;
        jp["language"] = to_string(p.language);
        jp["metrics"] = metrics_json(p.metrics);
        jp["dropped_names"] = p.dropped;
        list.push_back(jp);
    }
    j["programs"] = list;
    return j.dump(2) + "\n";
}

std::string scores_csv(const std::vector<ProgramScore>& programs) {
    std::string out = "program_id,language,tp,fp,fn,precision,recall,f1\n";
    char buf[128];
    for (const auto& p : programs) {
        const auto& m = p.metrics;
        std::snprintf(buf, sizeof buf, ",%ld,%ld,%ld,%.6f,%.6f,%.6f\n", m.tp, m.fp, m.fn, m.precision, m.recall, m.f1);
        out += p.program_id;
        out += ',';
        out += to_string(p.language);
        out += buf;
    }
    return out;
}

}  // namespace callwitness
