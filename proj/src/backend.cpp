#include "kheval/backend.hpp"

#include <cmath>

namespace kheval {

void GenerationParams::validate() const {
    if (temperature < 0.0)
        throw Error(ErrorKind::Precondition, "temperature must be >= 0");
    if (!(top_p > 0.0 && top_p <= 1.0))
        throw Error(ErrorKind::Precondition, "top_p must be in (0, 1]");
    if (max_tokens <= 0)
        throw Error(ErrorKind::Precondition, "max_tokens must be > 0");
    if (n < 1)
        throw Error(ErrorKind::Precondition, "n must be >= 1");
    if (logprobs_k && (*logprobs_k < 1 || *logprobs_k > 20))
        throw Error(ErrorKind::Precondition, "logprobs_k must be in [1, 20]");
}

void validate_candidate(const Candidate& c) {
    if (c.token_logprobs.empty()) return;
    double sum = 0.0;
    for (const TokenLogprob& t : c.token_logprobs) sum += t.logprob;
    if (c.cumulative_logprob && std::abs(*c.cumulative_logprob - sum) > 1e-9) {
        throw Error(ErrorKind::Internal,
                    "candidate cumulative_logprob does not match per-token sum");
    }
}

std::vector<Candidate> Backend::generate(const std::string& prompt,
                                         const GenerationParams& params) {
    params.validate();
    if (params.n > 1 && !capabilities().supports_n_sampling) {
        throw Error(ErrorKind::CapabilityError, "backend does not support n > 1 sampling");
    }
    auto candidates = generate_impl(prompt, params);
    for (const Candidate& c : candidates) validate_candidate(c);
    return candidates;
}

Candidate Backend::judge(const std::string& judge_prompt, const GenerationParams& params) {
    if (params.n != 1)
        throw Error(ErrorKind::Precondition, "judge calls require params.n == 1");
    GenerationParams effective = params;
    effective.temperature = 0.0;  // judging is always deterministic
    effective.validate();
    Candidate c = judge_impl(judge_prompt, effective);
    validate_candidate(c);
    return c;
}

}  // namespace kheval
