#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kheval/backend.hpp"

namespace kheval {

struct HttpBackendOptions {
    std::string base_url;    // falls back to KHEVAL_BASE_URL
    std::string model_name = "default";
    int timeout_ms = 30000;
    std::string api_key;     // falls back to KHEVAL_API_KEY; may stay empty
    int max_attempts = 3;    // on TransportError
    int backoff_base_ms = 250;
    int backoff_factor = 4;
    bool retry_jitter = true;  // full jitter; disabled under test mode
};

/// OpenAI-compatible HTTP client: chat completions for generation and
/// judging, the completions endpoint with echo+logprobs for continuation
/// scoring and next-token lookahead. Each request owns its own connection;
/// instances are freely shared across workers.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    BackendCapabilities capabilities() const override {
        return {.supports_scoring = true,
                .supports_next_token_topk = true,
                .supports_n_sampling = true};
    }

    /// GET {base_url}/v1/models; TransportError after retries if unreachable.
    void probe() override;

    std::pair<double, std::vector<TokenLogprob>> score_continuation(
        const std::string& prompt, const std::string& continuation) override;
    std::vector<ScoredToken> next_token_topk(const std::string& prefix, int k) override;

    const HttpBackendOptions& options() const { return options_; }

protected:
    std::vector<Candidate> generate_impl(const std::string& prompt,
                                         const GenerationParams& params) override;
    Candidate judge_impl(const std::string& judge_prompt,
                         const GenerationParams& params) override;

private:
    nlohmann::json post_json(const std::string& path, const nlohmann::json& body);

    HttpBackendOptions options_;
};

// Wire-format parsing, exposed so tests can drive it with hand-built
// response fixtures.

/// Pulls candidates out of a chat-completions response body.
std::vector<Candidate> parse_chat_candidates(const nlohmann::json& response);

/// Sums exactly the continuation tokens of an echoed completions logprobs
/// block, using the server's character offsets. Tokens at offset >=
/// prompt_length belong to the continuation. Throws AlignmentError when the
/// offsets are absent, a token straddles the boundary, or a continuation
/// token carries no logprob.
std::pair<double, std::vector<TokenLogprob>> parse_echo_continuation(
    const nlohmann::json& logprobs, size_t prompt_length);

/// Extracts the top-k distribution of the first generated token from a
/// completions logprobs block, sorted by logprob descending then token text.
std::vector<ScoredToken> parse_first_token_topk(const nlohmann::json& logprobs, int k);

}  // namespace kheval
