// Standalone runner for the bundled OpenAI-compatible mock server, handy for
// poking the HTTP backend by hand:
//   kheval_mock_server [--latency-ms N] [--script NAME] [--seed N]

#include <charconv>
#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include "kheval/fixtures.hpp"
#include "kheval/mock_server.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

long long parse_int(const std::string& value, const char* flag) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        std::cerr << flag << " needs an integer, got '" << value << "'\n";
        std::exit(2);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    kheval::MockServerOptions options;
    std::string script;
    std::uint64_t seed = 0;

    std::vector<std::string> args(argv + 1, argv + argc);
    for (size_t i = 0; i < args.size(); ++i) {
        auto value = [&](const char* flag) -> std::string {
            if (i + 1 >= args.size()) {
                std::cerr << flag << " needs a value\n";
                std::exit(2);
            }
            return args[++i];
        };
        if (args[i] == "--latency-ms") {
            options.latency_ms = static_cast<int>(parse_int(value("--latency-ms"), "--latency-ms"));
        } else if (args[i] == "--script") {
            script = value("--script");
        } else if (args[i] == "--seed") {
            seed = static_cast<std::uint64_t>(parse_int(value("--seed"), "--seed"));
        } else {
            std::cerr << "usage: kheval_mock_server [--latency-ms N] [--script NAME] [--seed N]\n";
            return 2;
        }
    }

    kheval::MockServer server(kheval::make_scripted_mock(script, seed), options);
    std::cout << "mock server listening on " << server.base_url() << "\n";
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    return 0;
}
