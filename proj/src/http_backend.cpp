#include "kheval/http_backend.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

namespace kheval {

using nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value ? value : fallback;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty()) options_.base_url = env_or("KHEVAL_BASE_URL", "");
    if (options_.api_key.empty()) options_.api_key = env_or("KHEVAL_API_KEY", "");
    if (options_.base_url.empty()) {
        throw Error(ErrorKind::ConfigError,
                    "HTTP backend needs a base URL (config backend.base_url or KHEVAL_BASE_URL)");
    }
}

json HttpBackend::post_json(const std::string& path, const json& body) {
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
        if (attempt > 0) {
            double delay_ms = options_.backoff_base_ms;
            for (int i = 1; i < attempt; ++i) delay_ms *= options_.backoff_factor;
            if (options_.retry_jitter) {
                static thread_local std::mt19937_64 rng{std::random_device{}()};
                delay_ms = std::uniform_real_distribution<double>(0.0, delay_ms)(rng);
            }
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<long>(delay_ms)));
        }

        httplib::Client client(options_.base_url);
        client.set_connection_timeout(0, options_.timeout_ms * 1000LL);
        client.set_read_timeout(0, options_.timeout_ms * 1000LL);
        httplib::Headers headers;
        if (!options_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + options_.api_key);
        }
        auto result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_error = "connection to " + options_.base_url + " failed: " +
                         httplib::to_string(result.error());
            continue;  // retryable
        }
        if (result->status >= 400 && result->status < 500) {
            throw Error(ErrorKind::BackendRefusal,
                        "HTTP " + std::to_string(result->status) + " from " + path + ": " +
                            result->body);
        }
        if (result->status != 200) {
            last_error = "HTTP " + std::to_string(result->status) + " from " + path;
            continue;  // 5xx: retryable
        }
        json parsed = json::parse(result->body, nullptr, false);
        if (parsed.is_discarded()) {
            throw Error(ErrorKind::TransportError, "malformed JSON response from " + path);
        }
        return parsed;
    }
    throw Error(ErrorKind::TransportError,
                last_error + " (after " + std::to_string(options_.max_attempts) + " attempts)");
}

void HttpBackend::probe() {
    std::string last_error;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
        httplib::Client client(options_.base_url);
        client.set_connection_timeout(0, options_.timeout_ms * 1000LL);
        client.set_read_timeout(0, options_.timeout_ms * 1000LL);
        auto result = client.Get("/v1/models");
        if (result && result->status == 200) return;
        last_error = result ? "HTTP " + std::to_string(result->status)
                            : httplib::to_string(result.error());
    }
    throw Error(ErrorKind::TransportError,
                "backend at " + options_.base_url + " unreachable: " + last_error);
}

std::vector<Candidate> parse_chat_candidates(const json& response) {
    if (!response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty()) {
        throw Error(ErrorKind::TransportError, "chat response carries no choices");
    }
    std::vector<Candidate> out;
    for (const json& choice : response["choices"]) {
        Candidate c;
        if (!choice.contains("message") || !choice["message"].contains("content")) {
            throw Error(ErrorKind::TransportError, "chat choice carries no message content");
        }
        c.text = choice["message"]["content"].get<std::string>();
        if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
            choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array()) {
            double total = 0.0;
            for (const json& tok : choice["logprobs"]["content"]) {
                TokenLogprob t;
                t.token = tok.value("token", "");
                t.logprob = tok.value("logprob", 0.0);
                total += t.logprob;
                c.token_logprobs.push_back(std::move(t));
            }
            c.cumulative_logprob = total;
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::pair<double, std::vector<TokenLogprob>> parse_echo_continuation(const json& logprobs,
                                                                     size_t prompt_length) {
    if (!logprobs.is_object() || !logprobs.contains("text_offset") ||
        !logprobs["text_offset"].is_array()) {
        throw Error(ErrorKind::AlignmentError,
                    "server reported no character offsets; cannot isolate the continuation");
    }
    const json& offsets = logprobs["text_offset"];
    const json& tokens = logprobs.contains("tokens") ? logprobs["tokens"] : json::array();
    const json& lps = logprobs.contains("token_logprobs") ? logprobs["token_logprobs"]
                                                          : json::array();
    if (offsets.size() != tokens.size() || offsets.size() != lps.size()) {
        throw Error(ErrorKind::AlignmentError, "offset/token/logprob arrays disagree in length");
    }

    double total = 0.0;
    std::vector<TokenLogprob> continuation;
    for (size_t i = 0; i < offsets.size(); ++i) {
        const size_t offset = offsets[i].get<size_t>();
        const std::string token = tokens[i].get<std::string>();
        if (offset < prompt_length) {
            if (offset + token.size() > prompt_length) {
                throw Error(ErrorKind::AlignmentError,
                            "token '" + token + "' straddles the prompt/continuation boundary");
            }
            continue;  // prompt token
        }
        if (lps[i].is_null()) {
            throw Error(ErrorKind::AlignmentError,
                        "continuation token '" + token + "' carries no logprob");
        }
        const double lp = lps[i].get<double>();
        total += lp;
        continuation.push_back({token, lp});
    }
    if (continuation.empty()) {
        throw Error(ErrorKind::AlignmentError, "no tokens found at continuation offsets");
    }
    return {total, continuation};
}

std::vector<ScoredToken> parse_first_token_topk(const json& logprobs, int k) {
    if (!logprobs.is_object() || !logprobs.contains("top_logprobs") ||
        !logprobs["top_logprobs"].is_array() || logprobs["top_logprobs"].empty()) {
        throw Error(ErrorKind::TransportError, "completions response carries no top_logprobs");
    }
    std::vector<ScoredToken> out;
    for (const auto& [token, lp] : logprobs["top_logprobs"][0].items()) {
        out.emplace_back(token, lp.get<double>());
    }
    std::sort(out.begin(), out.end(), [](const ScoredToken& a, const ScoredToken& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<size_t>(k) < out.size()) out.resize(static_cast<size_t>(k));
    return out;
}

std::vector<Candidate> HttpBackend::generate_impl(const std::string& prompt,
                                                  const GenerationParams& params) {
    json body;
    body["model"] = options_.model_name;
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = params.temperature;
    body["top_p"] = params.top_p;
    body["max_tokens"] = params.max_tokens;
    body["n"] = params.n;
    if (params.seed) body["seed"] = *params.seed;
    body["logprobs"] = true;
    if (params.logprobs_k) body["top_logprobs"] = *params.logprobs_k;
    return parse_chat_candidates(post_json("/v1/chat/completions", body));
}

Candidate HttpBackend::judge_impl(const std::string& judge_prompt,
                                  const GenerationParams& params) {
    return generate_impl(judge_prompt, params).front();
}

std::pair<double, std::vector<TokenLogprob>> HttpBackend::score_continuation(
    const std::string& prompt, const std::string& continuation) {
    if (continuation.empty()) {
        throw Error(ErrorKind::Precondition, "continuation must be nonempty");
    }
    json body;
    body["model"] = options_.model_name;
    body["prompt"] = prompt + continuation;
    body["max_tokens"] = 0;
    body["echo"] = true;
    body["logprobs"] = 1;
    const json response = post_json("/v1/completions", body);
    if (!response.contains("choices") || response["choices"].empty() ||
        !response["choices"][0].contains("logprobs")) {
        throw Error(ErrorKind::AlignmentError, "completions response carries no logprobs block");
    }
    return parse_echo_continuation(response["choices"][0]["logprobs"], prompt.size());
}

std::vector<ScoredToken> HttpBackend::next_token_topk(const std::string& prefix, int k) {
    if (k < 1) throw Error(ErrorKind::Precondition, "k must be >= 1");
    json body;
    body["model"] = options_.model_name;
    body["prompt"] = prefix;
    body["max_tokens"] = 1;
    body["logprobs"] = k;
    const json response = post_json("/v1/completions", body);
    if (!response.contains("choices") || response["choices"].empty() ||
        !response["choices"][0].contains("logprobs")) {
        throw Error(ErrorKind::TransportError, "completions response carries no logprobs block");
    }
    return parse_first_token_topk(response["choices"][0]["logprobs"], k);
}

}  // namespace kheval
