#include <doctest.h>

#include <nlohmann/json.hpp>

#include "kheval/http_backend.hpp"
#include "kheval/mock_server.hpp"

using namespace kheval;
using nlohmann::json;

namespace {

HttpBackendOptions test_options(const std::string& base_url) {
    HttpBackendOptions options;
    options.base_url = base_url;
    options.model_name = "mock-model";
    options.timeout_ms = 5000;
    options.max_attempts = 3;
    options.backoff_base_ms = 1;
    options.retry_jitter = false;  // deterministic retries under test
    return options;
}

}  // namespace

TEST_CASE("echo offset arithmetic isolates the continuation") {
    // hand-built wire fixture: prompt occupies [0,12), continuation [12,20)
    json logprobs;
    logprobs["tokens"] = {"hello ", "world ", "abcd ", "efg"};
    logprobs["text_offset"] = {0, 6, 12, 17};
    logprobs["token_logprobs"] = {nullptr, -0.5, -1.0, -0.25};

    auto [total, tokens] = parse_echo_continuation(logprobs, 12);
    CHECK(total == doctest::Approx(-1.25).epsilon(1e-12));
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].token == "abcd ");
    CHECK(tokens[1].token == "efg");

    SUBCASE("straddling token is an alignment error") {
        json bad;
        bad["tokens"] = {"0123456789", "XXXX"};
        bad["text_offset"] = {0, 10};
        bad["token_logprobs"] = {nullptr, -1.0};
        CHECK_THROWS_AS(parse_echo_continuation(bad, 12), Error);
    }
    SUBCASE("absent offsets are an alignment error, not a guess") {
        json bad;
        bad["tokens"] = {"a", "b"};
        bad["token_logprobs"] = {nullptr, -1.0};
        CHECK_THROWS_AS(parse_echo_continuation(bad, 1), Error);
    }
    SUBCASE("null logprob inside the continuation is an alignment error") {
        json bad;
        bad["tokens"] = {"ab", "cd"};
        bad["text_offset"] = {0, 2};
        bad["token_logprobs"] = {nullptr, nullptr};
        CHECK_THROWS_AS(parse_echo_continuation(bad, 2), Error);
    }
}

TEST_CASE("wire round-trip against the bundled mock server") {
    auto mock = std::make_shared<MockBackend>(7);
    mock->set_answer("2+2=?", "정답: 4");
    ChainModel chain;
    chain.prompt = "P";
    chain.initial = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
    mock->set_chain_model(chain);
    MockServer server(mock);
    HttpBackend backend(test_options(server.base_url()));

    SUBCASE("probe succeeds") { CHECK_NOTHROW(backend.probe()); }

    SUBCASE("n=2 candidates parsed from the choices array") {
        GenerationParams params;
        params.n = 2;
        const auto candidates = backend.generate("2+2=?", params);
        REQUIRE(candidates.size() == 2);
        CHECK(candidates[0].text == "정답: 4");
        CHECK(candidates[1].text == "정답: 4");
        REQUIRE(candidates[0].cumulative_logprob.has_value());
    }

    SUBCASE("scoring over the wire is deterministic") {
        auto [first, tokens] = backend.score_continuation("문제: 답은? ", "정답 사");
        auto [second, tokens2] = backend.score_continuation("문제: 답은? ", "정답 사");
        CHECK(first == second);
        CHECK(tokens.size() == tokens2.size());
        CHECK(first < 0.0);
    }

    SUBCASE("next-token lookahead matches the in-process distribution") {
        const auto direct = mock->next_token_topk("P", 2);
        const auto wired = backend.next_token_topk("P", 2);
        REQUIRE(wired.size() == direct.size());
        for (size_t i = 0; i < wired.size(); ++i) {
            CHECK(wired[i].first == direct[i].first);
            CHECK(wired[i].second == doctest::Approx(direct[i].second).epsilon(1e-9));
        }
    }

    SUBCASE("judge prompts route to the scripted judge") {
        GenerationParams params;
        params.n = 1;
        const std::string prompt =
            "지시문\n[기준 답안]\n서울\n\n[모델 응답]\n서울입니다\n\n판정 결과를 JSON으로.";
        const Candidate verdict = backend.judge(prompt, params);
        CHECK(verdict.text.find("\"correct\":true") != std::string::npos);
    }
}

TEST_CASE("4xx responses refuse instead of retrying") {
    auto mock = std::make_shared<MockBackend>(0);
    MockServerOptions options;
    options.api_key = "secret";
    MockServer server(mock, options);

    HttpBackend unauthorized(test_options(server.base_url()));
    GenerationParams params;
    try {
        unauthorized.generate("x", params);
        FAIL("expected BackendRefusal");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BackendRefusal);
    }

    auto authorized_options = test_options(server.base_url());
    authorized_options.api_key = "secret";
    HttpBackend authorized(authorized_options);
    CHECK_NOTHROW(authorized.generate("x", params));
}

TEST_CASE("environment variables supply base URL and API key") {
    auto mock = std::make_shared<MockBackend>(0);
    mock->set_answer("환경", "정답: env");
    MockServerOptions options;
    options.api_key = "env-secret";
    MockServer server(mock, options);

    setenv("KHEVAL_BASE_URL", server.base_url().c_str(), 1);
    setenv("KHEVAL_API_KEY", "env-secret", 1);
    HttpBackendOptions empty;  // both fields come from the environment
    empty.retry_jitter = false;
    empty.backoff_base_ms = 1;
    HttpBackend backend(empty);
    unsetenv("KHEVAL_BASE_URL");
    unsetenv("KHEVAL_API_KEY");

    GenerationParams params;
    const auto candidates = backend.generate("환경", params);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].text == "정답: env");
}

TEST_CASE("unreachable endpoints raise TransportError after retries") {
    auto options = test_options("http://127.0.0.1:1");  // nothing listens here
    options.timeout_ms = 200;
    HttpBackend backend(options);
    GenerationParams params;
    try {
        backend.generate("x", params);
        FAIL("expected TransportError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TransportError);
        CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
    }
    CHECK_THROWS_AS(backend.probe(), Error);
}
