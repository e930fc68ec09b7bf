#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kheval/error.hpp"

namespace kheval {

struct GenerationParams {
    double temperature = 0.0;
    double top_p = 1.0;
    int max_tokens = 256;
    int n = 1;
    std::optional<std::uint64_t> seed;
    std::optional<int> logprobs_k;  // request top-k per-token logprobs, 1..20

    void validate() const;
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;  // <= 0
};

struct Candidate {
    std::string text;
    std::vector<TokenLogprob> token_logprobs;  // empty means not reported
    std::optional<double> cumulative_logprob;
};

/// Checks the Candidate consistency invariant: when per-token logprobs are
/// present, the cumulative must equal their sum within 1e-9. Called on every
/// parsed backend response.
void validate_candidate(const Candidate& c);

struct BackendCapabilities {
    bool supports_scoring = false;
    bool supports_next_token_topk = false;
    bool supports_n_sampling = false;
};

using ScoredToken = std::pair<std::string, double>;

/// Uniform model-access contract covering generation, continuation scoring,
/// next-token lookahead, and judging. Instances are shareable across workers;
/// every call owns its own connection/RNG state.
class Backend {
public:
    virtual ~Backend() = default;

    virtual BackendCapabilities capabilities() const = 0;

    /// Reachability check run once at model-setup time. Remote backends
    /// throw TransportError when the endpoint cannot be reached at all;
    /// in-process backends have nothing to probe.
    virtual void probe() {}

    /// Returns exactly params.n candidates. With temperature 0 and a fixed
    /// seed, repeated calls return identical candidates.
    std::vector<Candidate> generate(const std::string& prompt, const GenerationParams& params);

    /// Total logprob of exactly the continuation tokens (prompt excluded),
    /// plus the per-token breakdown.
    virtual std::pair<double, std::vector<TokenLogprob>> score_continuation(
        const std::string& prompt, const std::string& continuation) = 0;

    /// Top-k next tokens for a prefix, sorted by logprob descending, ties
    /// broken by token text ascending. May return fewer than k entries when
    /// the vocabulary is smaller.
    virtual std::vector<ScoredToken> next_token_topk(const std::string& prefix, int k) = 0;

    /// Judging mode: single candidate, temperature forced to 0 regardless of
    /// caller params so verdicts are reproducible.
    Candidate judge(const std::string& judge_prompt, const GenerationParams& params);

protected:
    virtual std::vector<Candidate> generate_impl(const std::string& prompt,
                                                 const GenerationParams& params) = 0;
    virtual Candidate judge_impl(const std::string& judge_prompt,
                                 const GenerationParams& params) = 0;
};

}  // namespace kheval
