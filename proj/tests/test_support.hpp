#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kheval/backend.hpp"
#include "kheval/mock_backend.hpp"

namespace kheval::test {

/// Backend returning a canned candidate list, for tests that need exact
/// control over candidates without scripting the mock.
class FixedBackend : public Backend {
public:
    std::vector<Candidate> canned;

    BackendCapabilities capabilities() const override {
        return {.supports_scoring = true,
                .supports_next_token_topk = true,
                .supports_n_sampling = true};
    }
    std::pair<double, std::vector<TokenLogprob>> score_continuation(
        const std::string&, const std::string&) override {
        throw Error(ErrorKind::CapabilityError, "FixedBackend does not score");
    }
    std::vector<ScoredToken> next_token_topk(const std::string&, int) override {
        throw Error(ErrorKind::CapabilityError, "FixedBackend has no vocabulary");
    }

protected:
    std::vector<Candidate> generate_impl(const std::string&,
                                         const GenerationParams& params) override {
        std::vector<Candidate> out = canned;
        out.resize(static_cast<size_t>(params.n));
        return out;
    }
    Candidate judge_impl(const std::string&, const GenerationParams&) override {
        return canned.front();
    }
};

inline Candidate make_candidate(std::string text, std::vector<double> logprobs) {
    Candidate c;
    c.text = std::move(text);
    double total = 0.0;
    for (size_t i = 0; i < logprobs.size(); ++i) {
        c.token_logprobs.push_back({"t" + std::to_string(i), logprobs[i]});
        total += logprobs[i];
    }
    c.cumulative_logprob = total;
    return c;
}

/// Exact probability that a majority vote over n iid draws from `weights`
/// (index 0 = the correct answer) elects index 0, enumerating all ordered
/// outcome sequences and applying the first-occurrence tie-break. This is an
/// independent oracle: it never calls the scaling implementation.
inline double exact_vote_accuracy(const std::vector<double>& weights, int n) {
    double total_weight = 0.0;
    for (double w : weights) total_weight += w;
    const size_t k = weights.size();

    double correct_probability = 0.0;
    std::vector<size_t> sequence(static_cast<size_t>(n), 0);
    while (true) {
        double p = 1.0;
        for (size_t i = 0; i < sequence.size(); ++i) p *= weights[sequence[i]] / total_weight;

        std::map<size_t, int> counts;
        for (size_t idx : sequence) ++counts[idx];
        size_t winner = sequence[0];
        int winner_count = 0;
        std::vector<size_t> seen;
        for (size_t idx : sequence) {
            if (std::find(seen.begin(), seen.end(), idx) != seen.end()) continue;
            seen.push_back(idx);
            if (counts[idx] > winner_count) {
                winner_count = counts[idx];
                winner = idx;
            }
        }
        if (winner == 0) correct_probability += p;

        // next sequence in lexicographic order
        size_t pos = sequence.size();
        while (pos > 0) {
            --pos;
            if (++sequence[pos] < k) break;
            sequence[pos] = 0;
            if (pos == 0) return correct_probability;
        }
    }
}

/// Enumerates every token sequence of the chain model that either ends on
/// EOS or reaches exactly max_steps tokens, and returns the highest raw-log
/// probability one. Mirrors the beam-search candidate space independently.
struct EnumeratedBest {
    std::vector<std::string> tokens;
    double logprob = -1e300;
};

inline void enumerate_paths(const ChainModel& chain, std::vector<std::string>& prefix,
                            double logprob, int max_steps, EnumeratedBest& best) {
    const bool finished = !prefix.empty() && prefix.back() == chain.eos;
    if (finished || static_cast<int>(prefix.size()) == max_steps) {
        if (logprob > best.logprob) best = {prefix, logprob};
        return;
    }
    const std::vector<std::pair<std::string, double>>* dist = nullptr;
    if (prefix.empty()) {
        dist = &chain.initial;
    } else {
        auto it = chain.transitions.find(prefix.back());
        if (it == chain.transitions.end()) {
            // dead end: the mock finishes unconditionally
            prefix.push_back(chain.eos);
            if (logprob > best.logprob) best = {prefix, logprob};
            prefix.pop_back();
            return;
        }
        dist = &it->second;
    }
    for (const auto& [token, weight] : *dist) {
        prefix.push_back(token);
        enumerate_paths(chain, prefix, logprob + std::log(weight), max_steps, best);
        prefix.pop_back();
    }
}

inline EnumeratedBest best_path_by_enumeration(const ChainModel& chain, int max_steps) {
    EnumeratedBest best;
    std::vector<std::string> prefix;
    enumerate_paths(chain, prefix, 0.0, max_steps, best);
    return best;
}

}  // namespace kheval::test
