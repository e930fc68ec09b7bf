#include "kheval/evaluators.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "kheval/math_value.hpp"

namespace kheval {

using nlohmann::json;

std::string generation_prompt(const Sample& sample) {
    std::string prompt = sample.input;
    for (const std::string& option : sample.options) {
        prompt += '\n';
        prompt += option;
    }
    return prompt;
}

std::string loglikelihood_prompt(const Sample& sample) {
    return sample.input + "\n정답: ";
}

namespace {

/// Shared core of string matching: normalized equality, or (MCQ) a bare
/// extracted letter resolving to the reference option index.
bool string_match_core(const Sample& sample, const std::string& extracted,
                       const std::string& reference_norm) {
    if (extracted == reference_norm) return true;
    if (sample.is_mcq() && sample.reference_index && extracted.size() == 1) {
        const char c = extracted[0];
        if (c >= 'a' && c <= 'z') {
            return (c - 'a') == *sample.reference_index;
        }
    }
    return false;
}

Verdict base_verdict(const Sample& sample, const std::string& output, const char* method) {
    Verdict v;
    v.sample_id = sample.id;
    v.raw_output = output;
    v.method = method;
    v.hangul_ratio = hangul_ratio(output);
    return v;
}

}  // namespace

Verdict string_match_eval(const Sample& sample, const std::string& output) {
    Verdict v = base_verdict(sample, output, "string_match");
    v.extracted = extract_answer(output);
    v.correct = string_match_core(sample, v.extracted, normalize_text(sample.reference));
    v.score = v.correct ? 1.0 : 0.0;
    return v;
}

Verdict loglikelihood_eval(const Sample& sample, Backend& backend, bool length_normalize) {
    if (!sample.is_mcq()) {
        throw Error(ErrorKind::Precondition,
                    "log_likelihood requires options on sample '" + sample.id + "'");
    }
    const std::string prompt = loglikelihood_prompt(sample);
    int predicted = 0;
    double best = 0.0;
    for (size_t i = 0; i < sample.options.size(); ++i) {
        auto [total, tokens] = backend.score_continuation(prompt, sample.options[i]);
        double score = total;
        if (length_normalize && !tokens.empty()) {
            score = total / static_cast<double>(tokens.size());
        }
        if (i == 0 || score > best) {
            best = score;
            predicted = static_cast<int>(i);
        }
    }
    Verdict v = base_verdict(sample, "", "log_likelihood");
    v.extracted = sample.options[predicted];
    v.correct = sample.reference_index && predicted == *sample.reference_index;
    v.score = v.correct ? 1.0 : 0.0;
    return v;
}

Verdict math_verify_eval(const Sample& sample, const std::string& output) {
    Verdict v = base_verdict(sample, output, "math_verify");
    v.extracted = extract_answer(output);
    const std::string reference_norm = normalize_text(sample.reference);

    const auto got = parse_math_value(v.extracted);
    const auto want = parse_math_value(reference_norm);
    if (got && want) {
        v.correct = math_values_equal(*got, *want);
    } else {
        // Unparseable on either side still counts plain string agreement.
        v.correct = string_match_core(sample, v.extracted, reference_norm);
    }
    v.score = v.correct ? 1.0 : 0.0;
    return v;
}

// -- LLM-as-a-judge ----------------------------------------------------------

namespace {

const std::string kDefaultKoTemplate =
    "당신은 한국어 평가 과제의 채점자입니다. 모델 응답이 기준 답안과 의미상 일치하는지 판정하세요.\n"
    "\n"
    "[질문]\n"
    "{{question}}\n"
    "\n"
    "[기준 답안]\n"
    "{{reference}}\n"
    "\n"
    "[모델 응답]\n"
    "{{response}}\n"
    "\n"
    "판정 결과를 JSON 객체 하나로만 출력하세요: {\"correct\": true|false, \"reason\": \"<근거>\"}\n";

const std::string kHonorificKoTemplate =
    "당신은 한국어 평가 과제의 채점자입니다. 모델 응답이 기준 답안과 의미상 일치하는지 판정하세요.\n"
    "또한 모델 응답의 경어·존댓말 사용이 질문의 격식 수준에 적절한지 함께 평가하고, "
    "부적절한 경우 근거에 기록하세요.\n"
    "\n"
    "[질문]\n"
    "{{question}}\n"
    "\n"
    "[기준 답안]\n"
    "{{reference}}\n"
    "\n"
    "[모델 응답]\n"
    "{{response}}\n"
    "\n"
    "판정 결과를 JSON 객체 하나로만 출력하세요: {\"correct\": true|false, \"reason\": \"<근거>\"}\n";

void replace_all(std::string& text, const std::string& placeholder, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
}

/// Scans for the first balanced JSON object carrying a boolean "correct".
std::optional<json> first_verdict_object(const std::string& text) {
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        int depth = 0;
        bool in_string = false, escaped = false;
        for (size_t j = i; j < text.size(); ++j) {
            const char ch = text[j];
            if (in_string) {
                if (escaped) escaped = false;
                else if (ch == '\\') escaped = true;
                else if (ch == '"') in_string = false;
                continue;
            }
            if (ch == '"') { in_string = true; continue; }
            if (ch == '{') ++depth;
            if (ch == '}') {
                if (--depth == 0) {
                    json obj = json::parse(text.substr(i, j - i + 1), nullptr, false);
                    if (!obj.is_discarded() && obj.is_object() && obj.contains("correct") &&
                        obj["correct"].is_boolean()) {
                        return obj;
                    }
                    break;  // keep scanning from the next '{'
                }
            }
        }
    }
    return std::nullopt;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty() || haystack.size() < needle.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(haystack[i + j])) !=
                std::tolower(static_cast<unsigned char>(needle[j]))) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace

const std::string& judge_template_text(const std::string& template_id) {
    if (template_id == "default_ko") return kDefaultKoTemplate;
    if (template_id == "honorific_ko") return kHonorificKoTemplate;
    throw Error(ErrorKind::UnknownTemplate,
                "judge template '" + template_id + "' (expected default_ko or honorific_ko)");
}

std::string render_judge_template(const std::string& template_text, const Sample& sample,
                                  const std::string& output) {
    std::string rendered = template_text;
    replace_all(rendered, "{{question}}", sample.input);
    replace_all(rendered, "{{reference}}", sample.reference);
    replace_all(rendered, "{{response}}", output.empty() ? "(응답 없음)" : output);
    return rendered;
}

std::string build_judge_prompt(const Sample& sample, const std::string& output,
                               const std::string& template_id) {
    return render_judge_template(judge_template_text(template_id), sample, output);
}

JudgeDecision parse_judge_verdict(const std::string& judge_text) {
    if (auto obj = first_verdict_object(judge_text)) {
        return {(*obj)["correct"].get<bool>(), true};
    }
    // Negative markers first: "incorrect" contains "correct".
    if (contains_ci(judge_text, "incorrect") || judge_text.find("오답") != std::string::npos) {
        return {false, true};
    }
    if (contains_ci(judge_text, "correct") || judge_text.find("정답") != std::string::npos) {
        return {true, true};
    }
    return {false, false};
}

Verdict llm_judge_eval(const Sample& sample, const std::string& output, Backend& judge_backend,
                       const std::string& template_id) {
    const std::string prompt = build_judge_prompt(sample, output, template_id);
    GenerationParams params;
    params.n = 1;

    Candidate reply = judge_backend.judge(prompt, params);
    JudgeDecision decision = parse_judge_verdict(reply.text);
    if (!decision.valid) {
        reply = judge_backend.judge(prompt + "\nJSON만 출력하세요.", params);
        decision = parse_judge_verdict(reply.text);
    }

    Verdict v = base_verdict(sample, output, "llm_judge");
    v.extracted = extract_answer(output);
    v.correct = decision.valid && decision.correct;
    v.score = v.correct ? 1.0 : 0.0;
    v.judge_raw = reply.text;
    v.judge_valid = decision.valid;
    return v;
}

Verdict apply_language_penalty(Verdict verdict, double ratio, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw Error(ErrorKind::Precondition, "language penalty threshold must be in [0, 1]");
    }
    verdict.hangul_ratio = ratio;
    if (ratio < threshold) {
        verdict.correct = false;
        verdict.penalty_applied = true;
        if (verdict.score) verdict.score = 0.0;
    }
    return verdict;
}

}  // namespace kheval
