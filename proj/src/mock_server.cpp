#include "kheval/mock_server.hpp"

#include <chrono>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kheval/hash.hpp"

namespace kheval {

using nlohmann::json;

struct MockServer::Impl {
    httplib::Server server;
};

namespace {

/// Whitespace-preserving tokenization for echoed prompts: each token is a
/// run of non-space bytes with any following spaces attached, so offsets
/// tile the whole string and a space-terminated context ends exactly on a
/// token boundary.
std::vector<std::pair<std::string, size_t>> offset_tokens(const std::string& text) {
    std::vector<std::pair<std::string, size_t>> tokens;
    size_t i = 0;
    while (i < text.size()) {
        size_t start = i;
        while (i < text.size() && text[i] != ' ') ++i;
        while (i < text.size() && text[i] == ' ') ++i;
        tokens.emplace_back(text.substr(start, i - start), start);
    }
    return tokens;
}

json error_body(const std::string& message) {
    return json{{"error", {{"message", message}}}};
}

}  // namespace

MockServer::MockServer(std::shared_ptr<MockBackend> backend, MockServerOptions options)
    : backend_(std::move(backend)), options_(std::move(options)), impl_(new Impl) {
    auto& server = impl_->server;

    auto guard = [this](const httplib::Request& req, httplib::Response& res) -> bool {
        if (options_.latency_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(options_.latency_ms));
        }
        if (!options_.api_key.empty()) {
            const std::string expected = "Bearer " + options_.api_key;
            if (req.get_header_value("Authorization") != expected) {
                res.status = 401;
                res.set_content(error_body("invalid api key").dump(), "application/json");
                return false;
            }
        }
        return true;
    };

    server.Get("/v1/models", [this, guard](const httplib::Request& req, httplib::Response& res) {
        if (!guard(req, res)) return;
        json body;
        body["object"] = "list";
        body["data"] = json::array({{{"id", options_.model_name}, {"object", "model"}}});
        res.set_content(body.dump(), "application/json");
    });

    server.Post("/v1/chat/completions",
                [this, guard](const httplib::Request& req, httplib::Response& res) {
        if (!guard(req, res)) return;
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("messages") || body["messages"].empty()) {
            res.status = 400;
            res.set_content(error_body("messages required").dump(), "application/json");
            return;
        }
        GenerationParams params;
        params.temperature = body.value("temperature", 0.0);
        params.top_p = body.value("top_p", 1.0);
        params.max_tokens = body.value("max_tokens", 256);
        params.n = body.value("n", 1);
        if (body.contains("seed")) params.seed = body["seed"].get<std::uint64_t>();

        const std::string prompt = body["messages"].back().value("content", "");
        if (!options_.fail_request_substring.empty() &&
            prompt.find(options_.fail_request_substring) != std::string::npos) {
            res.status = 500;
            res.set_content(error_body("scripted failure").dump(), "application/json");
            return;
        }
        std::vector<Candidate> candidates;
        try {
            // Rendered judge prompts are recognized so judging over the wire
            // hits the same scripted judge logic as the in-process mock.
            if (prompt.find("[기준 답안]") != std::string::npos && params.n == 1) {
                candidates.push_back(backend_->judge(prompt, params));
            } else {
                candidates = backend_->generate(prompt, params);
            }
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(error_body(e.what()).dump(), "application/json");
            return;
        }

        json choices = json::array();
        for (size_t i = 0; i < candidates.size(); ++i) {
            const Candidate& c = candidates[i];
            json content = json::array();
            for (const TokenLogprob& t : c.token_logprobs) {
                content.push_back({{"token", t.token}, {"logprob", t.logprob}});
            }
            choices.push_back({{"index", i},
                               {"message", {{"role", "assistant"}, {"content", c.text}}},
                               {"logprobs", {{"content", content}}},
                               {"finish_reason", "stop"}});
        }
        json out;
        out["object"] = "chat.completion";
        out["model"] = options_.model_name;
        out["choices"] = choices;
        res.set_content(out.dump(), "application/json");
    });

    server.Post("/v1/completions",
                [this, guard](const httplib::Request& req, httplib::Response& res) {
        if (!guard(req, res)) return;
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("prompt")) {
            res.status = 400;
            res.set_content(error_body("prompt required").dump(), "application/json");
            return;
        }
        const std::string prompt = body["prompt"].get<std::string>();
        const int max_tokens = body.value("max_tokens", 16);
        const bool echo = body.value("echo", false);
        json out;
        out["object"] = "text_completion";
        out["model"] = options_.model_name;

        if (echo && max_tokens == 0) {
            // scoring mode: echo the prompt with per-token logprobs
            json tokens = json::array(), logprobs = json::array(), offsets = json::array();
            const auto toks = offset_tokens(prompt);
            for (size_t i = 0; i < toks.size(); ++i) {
                tokens.push_back(toks[i].first);
                offsets.push_back(toks[i].second);
                if (i == 0) {
                    logprobs.push_back(nullptr);  // first token has no context
                } else {
                    logprobs.push_back(
                        mock_token_logprob(backend_->seed(), "echo", toks[i].first, i));
                }
            }
            out["choices"] = json::array(
                {{{"index", 0},
                  {"text", prompt},
                  {"logprobs",
                   {{"tokens", tokens}, {"token_logprobs", logprobs}, {"text_offset", offsets}}},
                  {"finish_reason", "stop"}}});
            res.set_content(out.dump(), "application/json");
            return;
        }

        // single-step lookahead: top-k distribution of the next token
        const int k = body.value("logprobs", 1);
        std::vector<ScoredToken> top;
        try {
            top = backend_->next_token_topk(prompt, k);
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(error_body(e.what()).dump(), "application/json");
            return;
        }
        json top_map = json::object();
        for (const auto& [token, lp] : top) top_map[token] = lp;
        const std::string first = top.empty() ? "" : top.front().first;
        out["choices"] = json::array(
            {{{"index", 0},
              {"text", first},
              {"logprobs",
               {{"tokens", json::array({first})},
                {"token_logprobs", json::array({top.empty() ? 0.0 : top.front().second})},
                {"top_logprobs", json::array({top_map})}}},
              {"finish_reason", "length"}}});
        res.set_content(out.dump(), "application/json");
    });

    port_ = server.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) {
        throw Error(ErrorKind::Internal, "mock server failed to bind a local port");
    }
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    server.wait_until_ready();
}

MockServer::~MockServer() {
    impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace kheval
