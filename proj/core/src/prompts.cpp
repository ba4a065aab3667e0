#include "callwitness/prompts.hpp"

#include <map>

namespace callwitness {

namespace {

constexpr std::string_view kEvalSystem =
    R"(You are an expert in {language} programming. You will examine and identify
the function calls in the given code. You must examine the code in detail by
resolving aliases, tracking variable assignments, following return values, and
understanding inheritance/method resolution.)";

constexpr std::string_view kEvalUser = R"(## Task Description

**Objective**: Examine the given {language} code and identify the function
calls that occur when this program is executed, then answer the questions.

**Instructions**:
1. For each question, list the function calls as a comma-separated list.
2. Do not include additional explanations or commentary.
3. Include both explicit and implicit function calls (e.g., __init__ when an
   object is created).
4. If a function is called through an alias or variable, resolve it to the
   actual function being called.
5. If a passed argument is not invoked within the function, do not include it.
6. If there are no function calls, leave the answer empty.
7. **IMPORTANT**: Always use fully qualified names with the module prefix.
   For example, use "main.MyClass.func" not "MyClass.func". The module name
   is the filename without extension (e.g., "main.py" -> "main").

**Format for Answers**:
- Provide your answer next to each question number.
- Do not include the questions in your answer.
- Example:
    1. module.func1, module.func2
    2. module.func3
    3.

{example}

**{language} Code Provided**:

{code}

**Questions**:
{questions}
**Answers**:
)";

constexpr std::string_view kPythonExample = R"(**Worked Example** (main.py):

class Greeter:
    def __init__(self, name):
        self.name = name

    def greet(self):
        return shout(self.name)

def shout(text):
    return text.upper()

g = Greeter("ada")
print(g.greet())

Questions:
1. Which functions does main.<toplevel> call?
2. Which functions does main.Greeter.greet call?

Answers:
1. main.Greeter.__init__, main.Greeter.greet
2. main.shout)";

constexpr std::string_view kJavaScriptExample = R"(**Worked Example** (main.js):

class Greeter {
  constructor(name) {
    this.name = name;
  }
  greet() {
    return shout(this.name);
  }
}

function shout(text) {
  return text.toUpperCase();
}

const g = new Greeter("ada");
console.log(g.greet());

Questions:
1. Which functions does main.<toplevel> call?
2. Which functions does main.Greeter.greet call?

Answers:
1. main.Greeter.constructor, main.Greeter.greet
2. main.shout)";

constexpr std::string_view kJavaExample = R"(**Worked Example** (Main.java):

public class Main {
    static class Greeter {
        private final String name;
        Greeter(String name) { this.name = name; }
        String greet() { return shout(name); }
    }

    static String shout(String text) { return text.toUpperCase(); }

    public static void main(String[] args) {
        Greeter g = new Greeter("ada");
        System.out.println(g.greet());
    }
}

Questions:
1. Which functions does Main:main call?
2. Which functions does Main.Greeter:greet call?

Answers:
1. Main.Greeter:<init>, Main.Greeter:greet
2. Main:shout)";

constexpr std::string_view kHarness = R"(You are converting real-world code into a self-contained program for
call graph analysis.

Below is a {language} source file from the {repo} project. Your task:

1. **Preserve the call patterns**: keep the same function/method call
   relationships
2. **Remove all external dependencies**: replace imports with stubs or
   inline implementations
3. **Make it self-contained**: the code must run on its own with no
   external packages
4. **Add an entry point**: {entry_point_instruction}
5. **Keep it 15-40 lines**: simplify if needed, but preserve the call
   structure
6. **Use realistic names**: don't rename to func1/func2, keep meaningful
   names from the original

## Original code from {repo}:
```
{source}
```

## Output format:
Return ONLY the rewritten code. No markdown, no explanation. Just the
runnable code.
)";

constexpr std::string_view kCot = R"(You are an expert programmer analyzing function calls in code.

Given the source code and questions below, produce a step-by-step reasoning
trace that walks through the code to identify all function calls, then
provide the final answers.

**Your output format must be:**
<think>
[Your step-by-step reasoning here. For each function/scope in the questions:
- Identify what code executes in that scope
- Trace variable assignments and aliases
- Resolve which functions are actually called
- Note implicit calls like __init__ from object creation
- Be concise but thorough]
</think>

[Numbered answers, one per line, matching the question numbers]

**Important:**
- The <think> block contains your reasoning process
- After </think>, output ONLY the numbered answers (no extra text)
- Use fully qualified names (e.g., main.func, main.MyClass.__init__)
- If no function calls, leave the answer empty

Here is the code and questions:

{user_prompt}

**Ground truth answers (use these as the correct answers):**
{ground_truth_answer}

Generate the reasoning trace that explains HOW you would arrive at these
answers by analyzing the code step by step, then output the answers.
)";

// Single pass, so placeholder-like text inside substituted values (source
// code, answers) is never expanded.
std::string fill(std::string_view tmpl, const std::map<std::string_view, std::string_view>& values) {
    std::string out;
    out.reserve(tmpl.size() + 1024);
    size_t pos = 0;
    while (pos < tmpl.size()) {
        const size_t open = tmpl.find('{', pos);
        if (open == std::string_view::npos) break;
        const size_t close = tmpl.find('}', open);
        if (close == std::string_view::npos) break;
        const auto it = values.find(tmpl.substr(open + 1, close - open - 1));
        if (it == values.end()) {
            out.append(tmpl.substr(pos, open + 1 - pos));
            pos = open + 1;
            continue;
        }
        out.append(tmpl.substr(pos, open - pos));
        out.append(it->second);
        pos = close + 1;
    }
    out.append(tmpl.substr(pos));
    return out;
}

std::string_view worked_example(Language language) noexcept {
    switch (language) {
        case Language::python: return kPythonExample;
        case Language::javascript: return kJavaScriptExample;
        case Language::java: return kJavaExample;
    }
    return kPythonExample;
}

QualifiedName comparable(const QualifiedName& name) {
    return name.language() == Language::java ? name.without_signature() : name;
}

}  // namespace

std::vector<QualifiedName> question_callers(const CallGraph& gold) {
    NameSet distinct;
    for (const auto& e : gold.edges()) distinct.insert(comparable(e.caller));
    return {distinct.begin(), distinct.end()};
}

std::string render_questions(const std::vector<QualifiedName>& callers) {
    std::string out;
    for (size_t i = 0; i < callers.size(); ++i) {
        out += std::to_string(i + 1) + ". Which functions does " + callers[i].text() + " call?\n";
    }
    return out;
}

EvalPrompt render_eval_prompt(const ProgramInstance& instance) {
    if (!instance.ground_truth) {
        throw Error(ErrorCode::missing_ground_truth, instance.program_id + " has no ground truth");
    }
    EvalPrompt prompt;
    prompt.callers = question_callers(*instance.ground_truth);
    const std::string questions = render_questions(prompt.callers);
    std::string_view code = instance.source;
    while (!code.empty() && code.back() == '\n') code.remove_suffix(1);
    const std::string_view lang = display_name(instance.language);
    prompt.system_text = fill(kEvalSystem, {{"language", lang}});
    prompt.user_text = fill(kEvalUser, {{"language", lang},
                                        {"example", worked_example(instance.language)},
                                        {"code", code},
                                        {"questions", questions}});
    return prompt;
}

std::string render_answer_block(const CallGraph& gold, const std::vector<QualifiedName>& callers) {
    std::map<QualifiedName, NameSet> callees;
    for (const auto& e : gold.edges()) callees[comparable(e.caller)].insert(comparable(e.callee));
    std::string out;
    for (size_t i = 0; i < callers.size(); ++i) {
        out += std::to_string(i + 1) + ".";
        const auto it = callees.find(callers[i]);
        if (it != callees.end()) {
            const char* sep = " ";
            for (const auto& c : it->second) {
                out += sep;
                out += c.text();
                sep = ", ";
            }
        }
        out += '\n';
    }
    return out;
}

std::string_view entry_point_instruction(Language language) noexcept {
    if (language == Language::java) {
        return "ensure there is a `public static void main(String[] args)` that triggers all calls; include the "
               "package declaration.";
    }
    return "ensure module-level calls trigger all interesting function calls.";
}

std::string render_harness_prompt(Language language, std::string_view repo, std::string_view source) {
    return fill(kHarness, {{"language", display_name(language)},
                           {"repo", repo},
                           {"source", source},
                           {"entry_point_instruction", entry_point_instruction(language)}});
}

std::string render_cot_prompt(std::string_view user_prompt, std::string_view ground_truth_answer) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.back() == '\n') s.remove_suffix(1);
        return s;
    };
    user_prompt = trim(user_prompt);
    ground_truth_answer = trim(ground_truth_answer);
    return fill(kCot, {{"user_prompt", user_prompt}, {"ground_truth_answer", ground_truth_answer}});
}

}  // namespace callwitness
