#include "kheval/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "kheval/error.hpp"

namespace kheval {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& reason) {
    throw Error(ErrorKind::ConfigError, "key '" + key + "': " + reason);
}

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& known,
                         const std::string& prefix) {
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        if (known.count(key) == 0) {
            config_error(prefix.empty() ? key : prefix + "." + key, "unknown key");
        }
    }
}

template <typename T>
void read_scalar(const YAML::Node& node, const char* key, T& out, const std::string& prefix) {
    if (!node[key]) return;
    try {
        out = node[key].as<T>();
    } catch (const YAML::Exception&) {
        config_error(prefix.empty() ? key : prefix + "." + key, "invalid value type");
    }
}

}  // namespace

void EvalConfig::validate() const {
    if (batch_size < 1) config_error("batch_size", "must be >= 1");
    if (max_workers < 1) config_error("max_workers", "must be >= 1");
    if (scaling.n < 1) config_error("scaling.n", "must be >= 1");
    if (scaling.beam_width < 1) config_error("scaling.beam_width", "must be >= 1");
    if (scaling.max_steps < 1) config_error("scaling.max_steps", "must be >= 1");
    if (scaling.temperature < 0.0) config_error("scaling.temperature", "must be >= 0");
    if (evaluation.language_penalty_threshold < 0.0 ||
        evaluation.language_penalty_threshold > 1.0) {
        config_error("evaluation.language_penalty_threshold", "must be in [0, 1]");
    }
    if (backend.timeout_ms < 1) config_error("backend.timeout_ms", "must be >= 1");
    static const std::set<std::string> methods = {"identity", "best_of_n", "self_consistency",
                                                  "beam_search"};
    if (methods.count(scaling.method) == 0) {
        config_error("scaling.method",
                     "must be one of identity/best_of_n/self_consistency/beam_search");
    }
}

EvalConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("invalid YAML: ") + e.what());
    }
    if (root.IsNull()) return EvalConfig{};
    if (!root.IsMap()) throw Error(ErrorKind::ConfigError, "config root must be a mapping");

    static const std::set<std::string> top_keys = {
        "default_dataset", "default_model",  "default_split", "default_evaluation_method",
        "batch_size",      "max_workers",    "scaling",       "evaluation",
        "backend",         "seed",           "output_path",   "subset",
        "dataset_path",
    };
    reject_unknown_keys(root, top_keys, "");

    EvalConfig cfg;
    read_scalar(root, "default_dataset", cfg.default_dataset, "");
    read_scalar(root, "default_model", cfg.default_model, "");
    if (root["default_split"]) {
        cfg.default_split = split_from_string(root["default_split"].as<std::string>());
    }
    read_scalar(root, "default_evaluation_method", cfg.default_evaluation_method, "");
    read_scalar(root, "batch_size", cfg.batch_size, "");
    read_scalar(root, "max_workers", cfg.max_workers, "");
    read_scalar(root, "seed", cfg.seed, "");
    read_scalar(root, "output_path", cfg.output_path, "");
    read_scalar(root, "dataset_path", cfg.dataset_path, "");
    if (root["subset"]) cfg.subset = root["subset"].as<std::string>();

    if (root["scaling"]) {
        const YAML::Node node = root["scaling"];
        if (!node.IsMap()) config_error("scaling", "must be a mapping");
        reject_unknown_keys(node, {"method", "n", "beam_width", "max_steps", "temperature"},
                            "scaling");
        read_scalar(node, "method", cfg.scaling.method, "scaling");
        read_scalar(node, "n", cfg.scaling.n, "scaling");
        read_scalar(node, "beam_width", cfg.scaling.beam_width, "scaling");
        read_scalar(node, "max_steps", cfg.scaling.max_steps, "scaling");
        read_scalar(node, "temperature", cfg.scaling.temperature, "scaling");
    }
    if (root["evaluation"]) {
        const YAML::Node node = root["evaluation"];
        if (!node.IsMap()) config_error("evaluation", "must be a mapping");
        reject_unknown_keys(node,
                            {"language_penalty_threshold", "judge_template", "length_normalize"},
                            "evaluation");
        read_scalar(node, "language_penalty_threshold",
                    cfg.evaluation.language_penalty_threshold, "evaluation");
        read_scalar(node, "judge_template", cfg.evaluation.judge_template, "evaluation");
        read_scalar(node, "length_normalize", cfg.evaluation.length_normalize, "evaluation");
    }
    if (root["backend"]) {
        const YAML::Node node = root["backend"];
        if (!node.IsMap()) config_error("backend", "must be a mapping");
        reject_unknown_keys(node, {"base_url", "model_name", "timeout_ms", "mock_script"},
                            "backend");
        read_scalar(node, "base_url", cfg.backend.base_url, "backend");
        read_scalar(node, "model_name", cfg.backend.model_name, "backend");
        read_scalar(node, "timeout_ms", cfg.backend.timeout_ms, "backend");
        read_scalar(node, "mock_script", cfg.backend.mock_script, "backend");
    }

    cfg.validate();
    return cfg;
}

EvalConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace kheval
