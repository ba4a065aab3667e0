#pragma once

// Prompt templates: the zero-shot evaluation prompt, the harness-generation
// prompt and the reasoning-trace prompt. Rendering is byte-deterministic.

#include "callwitness/schema.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace callwitness {

struct EvalPrompt {
    std::string system_text;
    std::string user_text;
    /// Question i (1-based) asks about callers[i - 1].
    std::vector<QualifiedName> callers;
};

/// Distinct ground-truth callers in canonical order. Java callers lose their
/// signature, so overloads share one question.
std::vector<QualifiedName> question_callers(const CallGraph& gold);

/// Throws Error{missing_ground_truth}.
EvalPrompt render_eval_prompt(const ProgramInstance& instance);

/// The numbered questions block alone.
std::string render_questions(const std::vector<QualifiedName>& callers);

/// Gold answers in the expected answer format ("1. a, b" / "2."), one line
/// per caller; java callees are written without signatures.
std::string render_answer_block(const CallGraph& gold, const std::vector<QualifiedName>& callers);

std::string_view entry_point_instruction(Language language) noexcept;

std::string render_harness_prompt(Language language, std::string_view repo, std::string_view source);

std::string render_cot_prompt(std::string_view user_prompt, std::string_view ground_truth_answer);

}  // namespace callwitness
