#pragma once

#include <memory>
#include <string>
#include <thread>

#include "kheval/mock_backend.hpp"

namespace kheval {

struct MockServerOptions {
    int latency_ms = 0;       // artificial per-request latency
    std::string api_key;      // when set, requests must carry the bearer token
    std::string model_name = "mock-model";
    // chat requests whose prompt contains this marker always fail with 500,
    // for exercising per-sample transport-failure handling
    std::string fail_request_substring;
};

/// Local HTTP server speaking the OpenAI-compatible subset the harness
/// consumes: POST /v1/chat/completions, POST /v1/completions (echo+logprobs
/// scoring and single-token lookahead) and GET /v1/models. All behaviour is
/// delegated to a MockBackend, so responses are pure functions of the
/// request and the backend's scripted state.
class MockServer {
public:
    explicit MockServer(std::shared_ptr<MockBackend> backend, MockServerOptions options = {});
    ~MockServer();

    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    int port() const { return port_; }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    MockBackend& backend() { return *backend_; }

private:
    struct Impl;
    std::shared_ptr<MockBackend> backend_;
    MockServerOptions options_;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace kheval
