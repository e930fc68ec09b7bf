#include "kheval/scaling.hpp"

#include <algorithm>

namespace kheval {

ScalingOutcome identity_decode(const std::string& prompt, Backend& backend,
                               const GenerationParams& params) {
    GenerationParams single = params;
    single.n = 1;
    ScalingOutcome outcome;
    outcome.all_candidates = backend.generate(prompt, single);
    outcome.final = outcome.all_candidates.front();
    outcome.method = "identity";
    return outcome;
}

ScalingOutcome best_of_n(const std::string& prompt, Backend& backend,
                         const GenerationParams& params, int n) {
    if (n < 1) throw Error(ErrorKind::Precondition, "best_of_n requires n >= 1");
    GenerationParams p = params;
    p.n = n;
    ScalingOutcome outcome;
    outcome.all_candidates = backend.generate(prompt, p);
    outcome.method = "best_of_n";

    size_t best = 0;
    double best_score = 0.0;
    for (size_t i = 0; i < outcome.all_candidates.size(); ++i) {
        const Candidate& c = outcome.all_candidates[i];
        if (!c.cumulative_logprob) {
            throw Error(ErrorKind::MissingLogprobs,
                        "candidate " + std::to_string(i) + " carries no cumulative_logprob");
        }
        const size_t tokens = c.token_logprobs.empty() ? 1 : c.token_logprobs.size();
        const double score = *c.cumulative_logprob / static_cast<double>(tokens);
        if (i == 0 || score > best_score) {
            best = i;
            best_score = score;
        }
    }
    outcome.final = outcome.all_candidates[best];
    return outcome;
}

ScalingOutcome self_consistency(const std::string& prompt, Backend& backend,
                                const GenerationParams& params, int n,
                                const AnswerExtractor& extractor) {
    if (n < 1) throw Error(ErrorKind::Precondition, "self_consistency requires n >= 1");
    GenerationParams p = params;
    p.n = n;
    ScalingOutcome outcome;
    outcome.all_candidates = backend.generate(prompt, p);
    outcome.method = "self_consistency";

    std::vector<std::string> answers;
    answers.reserve(outcome.all_candidates.size());
    std::map<std::string, int> tally;
    for (const Candidate& c : outcome.all_candidates) {
        answers.push_back(extractor(c.text));
        ++tally[answers.back()];
    }

    // winner: maximal count; among ties, the earliest first occurrence
    size_t winner_index = 0;
    int winner_count = 0;
    for (size_t i = 0; i < answers.size(); ++i) {
        const int count = tally[answers[i]];
        const bool is_first_occurrence =
            std::find(answers.begin(), answers.begin() + static_cast<std::ptrdiff_t>(i),
                      answers[i]) == answers.begin() + static_cast<std::ptrdiff_t>(i);
        if (is_first_occurrence && count > winner_count) {
            winner_count = count;
            winner_index = i;
        }
    }
    outcome.final = outcome.all_candidates[winner_index];
    outcome.vote_tally = std::move(tally);
    return outcome;
}

ScalingOutcome beam_search(const std::string& prompt, Backend& backend, int beam_width,
                           int max_steps, const std::string& eos_token) {
    if (beam_width < 1) throw Error(ErrorKind::Precondition, "beam_width must be >= 1");
    if (max_steps < 1) throw Error(ErrorKind::Precondition, "max_steps must be >= 1");
    if (!backend.capabilities().supports_next_token_topk) {
        throw Error(ErrorKind::CapabilityError, "backend does not support next_token_topk");
    }

    struct Beam {
        std::vector<TokenLogprob> steps;
        double logprob = 0.0;
        bool finished = false;
    };

    auto beam_tokens = [](const Beam& beam) {
        std::vector<std::string> tokens;
        tokens.reserve(beam.steps.size());
        for (const TokenLogprob& t : beam.steps) tokens.push_back(t.token);
        return tokens;
    };
    auto beam_less = [&](const Beam& a, const Beam& b) {
        if (a.logprob != b.logprob) return a.logprob > b.logprob;
        return beam_tokens(a) < beam_tokens(b);  // deterministic tie-break
    };

    std::vector<Beam> active = {Beam{}};
    std::vector<Beam> finished;

    for (int step = 0; step < max_steps && !active.empty(); ++step) {
        std::vector<Beam> expansions;
        for (const Beam& beam : active) {
            std::string prefix = prompt;
            for (const TokenLogprob& t : beam.steps) prefix += t.token;
            for (const auto& [token, logprob] : backend.next_token_topk(prefix, beam_width)) {
                Beam next = beam;
                next.steps.push_back({token, logprob});
                next.logprob += logprob;
                next.finished = token == eos_token;
                expansions.push_back(std::move(next));
            }
        }
        std::sort(expansions.begin(), expansions.end(), beam_less);
        active.clear();
        for (Beam& beam : expansions) {
            if (beam.finished) {
                finished.push_back(std::move(beam));
            } else if (active.size() < static_cast<size_t>(beam_width)) {
                active.push_back(std::move(beam));
            }
        }
    }

    std::sort(finished.begin(), finished.end(), beam_less);
    std::sort(active.begin(), active.end(), beam_less);

    ScalingOutcome outcome;
    outcome.method = "beam_search";
    auto to_candidate = [&](const Beam& beam) {
        Candidate c;
        for (const TokenLogprob& t : beam.steps) {
            if (t.token != eos_token) c.text += t.token;
        }
        c.token_logprobs = beam.steps;
        c.cumulative_logprob = beam.logprob;
        return c;
    };
    for (const Beam& beam : finished) outcome.all_candidates.push_back(to_candidate(beam));
    for (const Beam& beam : active) outcome.all_candidates.push_back(to_candidate(beam));
    if (outcome.all_candidates.empty()) {
        throw Error(ErrorKind::Internal, "beam search produced no candidates");
    }
    outcome.final = !finished.empty() ? to_candidate(finished.front()) : to_candidate(active.front());
    return outcome;
}

}  // namespace kheval
