#pragma once

#include <optional>
#include <string>

#include "kheval/backend.hpp"
#include "kheval/dataset.hpp"
#include "kheval/text.hpp"

namespace kheval {

/// Per-sample scoring result.
struct Verdict {
    std::string sample_id;
    std::string raw_output;
    std::string extracted;
    bool correct = false;
    std::optional<double> score;  // in [0,1]
    bool penalty_applied = false;
    double hangul_ratio = 1.0;
    std::string method;
    std::optional<std::string> judge_raw;
    std::optional<bool> judge_valid;
    bool infra_error = false;  // set by the pipeline on transport failure
};

/// Prompt shown to the model for generation-style evaluation: the question
/// plus, for MCQ items, one option per line.
std::string generation_prompt(const Sample& sample);

/// Context prefix for log-likelihood scoring; each option is scored as the
/// continuation of this string.
std::string loglikelihood_prompt(const Sample& sample);

Verdict string_match_eval(const Sample& sample, const std::string& output);

/// Scores every option as a continuation and predicts the argmax (ties go to
/// the lowest index). `length_normalize` divides each total by its token
/// count; off by default and recorded in reports.
Verdict loglikelihood_eval(const Sample& sample, Backend& backend, bool length_normalize = false);

/// Mathematical verification: both sides are parsed as numeric values and
/// compared exactly (rationals) or within tolerance. When either side does
/// not parse as a number the check falls back to string-match semantics, so
/// the math-verify correct set always contains the string-match correct set.
Verdict math_verify_eval(const Sample& sample, const std::string& output);

// -- LLM-as-a-judge ---------------------------------------------------------

/// Built-in template text for template_id in {default_ko, honorific_ko}.
/// Same content as the files shipped under data/templates/.
const std::string& judge_template_text(const std::string& template_id);

/// Renders {{question}}, {{reference}}, {{response}} into a template. An
/// empty response renders as the explicit placeholder "(응답 없음)".
std::string render_judge_template(const std::string& template_text, const Sample& sample,
                                  const std::string& output);

std::string build_judge_prompt(const Sample& sample, const std::string& output,
                               const std::string& template_id);

struct JudgeDecision {
    bool correct = false;
    bool valid = false;
};

/// Primary path: the first well-formed JSON object carrying a boolean
/// "correct". Fallback: case-insensitive scan for incorrect/오답 (false)
/// else correct/정답 (true). Neither => invalid.
JudgeDecision parse_judge_verdict(const std::string& judge_text);

/// Full judge round: build prompt, call the judge backend, parse. On an
/// invalid parse the call is retried once with an appended instruction to
/// emit JSON only; a still-invalid reply scores incorrect and keeps the raw
/// judge text for inspection.
Verdict llm_judge_eval(const Sample& sample, const std::string& output, Backend& judge_backend,
                       const std::string& template_id);

/// Forces the verdict incorrect and flags it when ratio < threshold. The
/// ratio is recorded on the verdict either way. Idempotent.
Verdict apply_language_penalty(Verdict verdict, double ratio, double threshold);

// -- registry adapter -------------------------------------------------------

struct EvalOptions {
    double language_penalty_threshold = 0.5;
    std::string judge_template = "default_ko";
    bool length_normalize = false;
};

class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual std::string name() const = 0;
    /// False for paradigms that score options directly instead of sampling.
    virtual bool needs_generation() const { return true; }
    virtual Verdict evaluate(const Sample& sample, const std::string& output, Backend& backend,
                             const EvalOptions& opts) const = 0;
};

}  // namespace kheval
