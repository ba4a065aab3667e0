#pragma once

#include "callwitness/schema.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

struct Metrics {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    /// Zero denominators give 0, never NaN.
    static Metrics from_counts(long tp, long fp, long fn);
    /// A metric triple without counts, e.g. a published table row.
    static Metrics from_values(double precision, double recall, double f1);
};

double f1_score(double precision, double recall) noexcept;

struct AnswerSheet {
    std::string program_id;
    /// Keys 1..k, one per question; unanswered questions map to {}.
    std::map<int, NameSet> per_caller;
    /// Names that could not be parsed, plus lines with an out-of-range index.
    int dropped = 0;
};

/// Reads `N. a, b` (or `N) a, b`) lines. Text outside numbered lines is
/// ignored; an index seen twice has its names merged.
AnswerSheet parse_answer(std::string_view text, const std::vector<QualifiedName>& callers, Language language,
                         std::string program_id = {});

/// Predicted edges of a sheet; java names lose their signatures.
EdgeSet predicted_edges(const AnswerSheet& answers, const std::vector<QualifiedName>& callers);

/// Throws Error{invalid_argument} if the sheet's indices exceed `callers`.
Metrics score_program(const AnswerSheet& answers, const CallGraph& gold, const std::vector<QualifiedName>& callers);

enum class Pooling { micro, macro };

std::string_view to_string(Pooling pooling) noexcept;
/// Throws Error{invalid_argument}.
Pooling parse_pooling(std::string_view tag);

struct Aggregate {
    std::map<Language, Metrics> per_language;
    /// Unweighted mean of the per-language P, R and F1; counts are summed.
    Metrics overall;
};

/// Within a language, micro pools tp/fp/fn over programs and macro averages
/// the program metrics. Throws Error{empty_input}.
Aggregate aggregate(const std::vector<std::pair<Language, Metrics>>& per_program, Pooling pooling = Pooling::micro);

/// Mean of P, R and F1 over `values`; throws Error{empty_input}.
Metrics mean_metrics(const std::vector<Metrics>& values);

struct ProgramScore {
    std::string program_id;
    Language language = Language::python;
    Metrics metrics;
    int dropped = 0;
};

/// scores.json: per-program, per-language and overall metrics.
std::string serialize_scores(const std::vector<ProgramScore>& programs, const Aggregate& totals, Pooling pooling);
std::string scores_csv(const std::vector<ProgramScore>& programs);

}  // namespace callwitness
