#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kheval/dataset.hpp"

namespace kheval {

struct ScalingConfig {
    std::string method = "identity";  // identity | best_of_n | self_consistency | beam_search
    int n = 1;
    int beam_width = 1;
    int max_steps = 64;
    double temperature = 0.7;  // used by stochastic methods; identity decodes at 0
};

struct EvaluationConfig {
    double language_penalty_threshold = 0.5;
    std::string judge_template = "default_ko";
    bool length_normalize = false;
};

struct BackendConfig {
    std::string base_url;  // falls back to KHEVAL_BASE_URL for the HTTP backend
    std::string model_name = "mock-model";
    int timeout_ms = 30000;
    std::string mock_script;  // bundled script for the mock backend
};

/// Full description of one evaluation run. The resolved snapshot embedded in
/// every report is sufficient to re-run identically.
struct EvalConfig {
    std::string default_dataset;
    std::string default_model = "mock";
    Split default_split = Split::Test;
    std::string default_evaluation_method = "string_match";
    int batch_size = 32;
    int max_workers = 4;
    ScalingConfig scaling;
    EvaluationConfig evaluation;
    BackendConfig backend;
    std::uint64_t seed = 42;
    std::string output_path;
    std::optional<std::string> subset;
    std::string dataset_path;  // source file for generic_jsonl

    void validate() const;  // ranges only; registry names are checked at run start
};

/// Loads a YAML config. Absent optional keys take their defaults; unknown
/// keys at any level are rejected (strict mode) with the offending key named.
EvalConfig load_config(const std::string& path);
EvalConfig parse_config(const std::string& yaml_text);

}  // namespace kheval
