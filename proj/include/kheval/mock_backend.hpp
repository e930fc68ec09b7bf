#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kheval/backend.hpp"

namespace kheval {

/// Fixed answer distribution for one prompt: answers[0] is the correct one.
/// Weights need not sum to 1; draws walk the CDF over their sum.
struct StochasticAnswers {
    std::vector<std::string> answers;
    std::vector<double> weights;
};

/// Markov next-token model over short string tokens. State is the last
/// generated token (the longest vocabulary token that suffixes the prefix
/// after `prompt`); an empty generation suffix uses `initial`. Weights are
/// raw probabilities; next_token_topk reports their natural logs.
struct ChainModel {
    std::string prompt;
    std::vector<std::pair<std::string, double>> initial;
    std::map<std::string, std::vector<std::pair<std::string, double>>> transitions;
    std::string eos = "$";
};

/// In-process deterministic backend. All pseudo-randomness derives from
/// (seed, prompt) through the documented scheme below, never from shared
/// RNG state, so results are independent of call order and worker count.
///
/// Stochastic draw scheme (replayable independently):
///   state = splitmix64(seed ^ fnv1a64(prompt))
///   per draw: state = splitmix64(state); u = unit_double(state)
///   walk the CDF of weights (normalized by their sum) to pick the answer.
/// With temperature 0 the highest-weight answer is returned instead.
class MockBackend : public Backend {
public:
    explicit MockBackend(std::uint64_t seed = 0) : seed_(seed) {}

    BackendCapabilities capabilities() const override {
        return {.supports_scoring = true,
                .supports_next_token_topk = true,
                .supports_n_sampling = true};
    }

    // -- scripting ------------------------------------------------------------

    /// Fixed generation output for any prompt containing `key`. Lookup picks
    /// the longest matching key (ties: lexicographically smallest).
    void set_answer(const std::string& key, const std::string& output);
    void set_stochastic(const std::string& key, StochasticAnswers answers);
    void set_score(const std::string& prompt, const std::string& continuation,
                   std::vector<TokenLogprob> tokens);
    void set_chain_model(ChainModel model);
    /// Scripted judge replies consumed FIFO before the built-in judge logic.
    void push_judge_response(const std::string& response);

    std::uint64_t seed() const { return seed_; }

    // -- test inspection (not for concurrent use) ------------------------------
    int judge_calls() const { return judge_calls_; }
    GenerationParams last_judge_params() const;

    std::pair<double, std::vector<TokenLogprob>> score_continuation(
        const std::string& prompt, const std::string& continuation) override;
    std::vector<ScoredToken> next_token_topk(const std::string& prefix, int k) override;

protected:
    std::vector<Candidate> generate_impl(const std::string& prompt,
                                         const GenerationParams& params) override;
    Candidate judge_impl(const std::string& judge_prompt,
                         const GenerationParams& params) override;

private:
    const std::string* find_by_substring(const std::map<std::string, std::string>& table,
                                         const std::string& prompt) const;
    const StochasticAnswers* find_stochastic(const std::string& prompt) const;
    std::string default_answer(const std::string& prompt) const;

    std::uint64_t seed_;
    std::map<std::string, std::string> answers_;
    std::map<std::string, StochasticAnswers> stochastic_;
    std::map<std::pair<std::string, std::string>, std::vector<TokenLogprob>> scores_;
    std::optional<ChainModel> chain_;

    mutable std::mutex mutex_;
    std::deque<std::string> judge_script_;
    std::atomic<int> judge_calls_{0};
    GenerationParams last_judge_params_;
};

/// Deterministic per-token fallback logprob used when no score is scripted.
/// Shared with the bundled mock server so wire-level tests can predict it.
double mock_token_logprob(std::uint64_t seed, const std::string& context,
                          const std::string& token, size_t index);

}  // namespace kheval
