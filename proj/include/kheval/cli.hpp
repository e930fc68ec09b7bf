#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kheval/config.hpp"

namespace kheval {

/// Parsed command-line flags. Every field is optional: flags override the
/// values of a --config file, which in turn override built-in defaults.
struct CliArgs {
    std::optional<std::string> model;
    std::optional<std::string> dataset;
    std::optional<std::string> dataset_path;
    std::optional<std::string> split;
    std::optional<std::string> evaluation_method;
    std::optional<std::string> config_path;
    std::optional<std::string> output;
    std::optional<std::string> subset;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> list_kind;  // datasets|backends|scalers|evaluators
    bool help_requested = false;
};

/// Parses argv (without the program name). Throws UsageError on unknown
/// flags or missing values.
CliArgs parse_args(const std::vector<std::string>& argv);

/// Applies flag precedence onto a (possibly file-loaded) config.
EvalConfig merge_args(EvalConfig base, const CliArgs& args);

/// Full CLI entry point; returns the process exit code.
///   0 success, 2 config/usage error, 3 dataset error,
///   4 backend unreachable, 5 internal error.
int run_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace kheval
