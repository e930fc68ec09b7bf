#include "kheval/builtins.hpp"

#include <charconv>

#include "kheval/fixtures.hpp"
#include "kheval/http_backend.hpp"
#include "kheval/mock_backend.hpp"

namespace kheval {

namespace {

std::string param_or(const ParamMap& params, const std::string& key, std::string fallback) {
    auto it = params.find(key);
    return it != params.end() ? it->second : std::move(fallback);
}

long long int_param_or(const ParamMap& params, const std::string& key, long long fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(it->second.data(),
                                           it->second.data() + it->second.size(), value);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size()) {
        throw Error(ErrorKind::ConfigError,
                    "parameter '" + key + "' must be an integer, got '" + it->second + "'");
    }
    return value;
}

// -- scaler adapters ----------------------------------------------------------

class IdentityScaler final : public Scaler {
public:
    std::string name() const override { return "identity"; }
    ScalingOutcome run(const std::string& prompt, Backend& backend,
                       const GenerationParams& params) const override {
        return identity_decode(prompt, backend, params);
    }
};

class BestOfNScaler final : public Scaler {
public:
    explicit BestOfNScaler(int n) : n_(n) {}
    std::string name() const override { return "best_of_n"; }
    ScalingOutcome run(const std::string& prompt, Backend& backend,
                       const GenerationParams& params) const override {
        return best_of_n(prompt, backend, params, n_);
    }

private:
    int n_;
};

class SelfConsistencyScaler final : public Scaler {
public:
    explicit SelfConsistencyScaler(int n) : n_(n) {}
    std::string name() const override { return "self_consistency"; }
    ScalingOutcome run(const std::string& prompt, Backend& backend,
                       const GenerationParams& params) const override {
        return self_consistency(prompt, backend, params, n_,
                                [](const std::string& text) { return extract_answer(text); });
    }

private:
    int n_;
};

class BeamSearchScaler final : public Scaler {
public:
    BeamSearchScaler(int beam_width, int max_steps)
        : beam_width_(beam_width), max_steps_(max_steps) {}
    std::string name() const override { return "beam_search"; }
    ScalingOutcome run(const std::string& prompt, Backend& backend,
                       const GenerationParams& /*params*/) const override {
        return beam_search(prompt, backend, beam_width_, max_steps_);
    }

private:
    int beam_width_;
    int max_steps_;
};

// -- evaluator adapters --------------------------------------------------------

class StringMatchEvaluator final : public Evaluator {
public:
    std::string name() const override { return "string_match"; }
    Verdict evaluate(const Sample& sample, const std::string& output, Backend&,
                     const EvalOptions&) const override {
        return string_match_eval(sample, output);
    }
};

class LogLikelihoodEvaluator final : public Evaluator {
public:
    std::string name() const override { return "log_likelihood"; }
    bool needs_generation() const override { return false; }
    Verdict evaluate(const Sample& sample, const std::string&, Backend& backend,
                     const EvalOptions& opts) const override {
        return loglikelihood_eval(sample, backend, opts.length_normalize);
    }
};

class MathVerifyEvaluator final : public Evaluator {
public:
    std::string name() const override { return "math_verify"; }
    Verdict evaluate(const Sample& sample, const std::string& output, Backend&,
                     const EvalOptions&) const override {
        return math_verify_eval(sample, output);
    }
};

class LlmJudgeEvaluator final : public Evaluator {
public:
    std::string name() const override { return "llm_judge"; }
    Verdict evaluate(const Sample& sample, const std::string& output, Backend& backend,
                     const EvalOptions& opts) const override {
        return llm_judge_eval(sample, output, backend, opts.judge_template);
    }
};

void register_if_absent(Registry& registry, ComponentKind kind, const std::string& name,
                        ComponentFactory factory, std::string description) {
    if (registry.contains(kind, name)) return;
    registry.register_component(kind, name,
                                ComponentEntry{name, std::move(factory), std::move(description)});
}

}  // namespace

void register_builtins(Registry& registry) {
    // datasets
    register_if_absent(registry, ComponentKind::Dataset, "generic_jsonl",
                       [](const ParamMap& params) -> std::any {
                           const std::string path = param_or(params, "path", "");
                           if (path.empty()) {
                               throw Error(ErrorKind::ConfigError,
                                           "generic_jsonl needs a 'path' parameter");
                           }
                           const Split split =
                               split_from_string(param_or(params, "split", "test"));
                           auto samples = std::make_shared<std::vector<Sample>>(
                               load_jsonl(path, split));
                           validate_dataset(*samples);
                           return DatasetHandle(samples);
                       },
                       "generic JSONL loader for custom files");
    for (const char* name : {"fixture_mcq", "fixture_math", "fixture_gen"}) {
        register_if_absent(registry, ComponentKind::Dataset, name,
                           [name = std::string(name)](const ParamMap&) -> std::any {
                               return DatasetHandle(std::make_shared<std::vector<Sample>>(
                                   fixture_dataset(name)));
                           },
                           "bundled synthetic fixture dataset");
    }

    // backends
    register_if_absent(registry, ComponentKind::Backend, "mock",
                       [](const ParamMap& params) -> std::any {
                           const auto seed = static_cast<std::uint64_t>(
                               int_param_or(params, "seed", 0));
                           return BackendHandle(
                               make_scripted_mock(param_or(params, "script", ""), seed));
                       },
                       "deterministic in-process mock backend");
    register_if_absent(registry, ComponentKind::Backend, "openai_http",
                       [](const ParamMap& params) -> std::any {
                           HttpBackendOptions options;
                           options.base_url = param_or(params, "base_url", "");
                           options.model_name = param_or(params, "model_name", "default");
                           options.timeout_ms =
                               static_cast<int>(int_param_or(params, "timeout_ms", 30000));
                           options.api_key = param_or(params, "api_key", "");
                           if (param_or(params, "test_mode", "") == "1") {
                               options.retry_jitter = false;
                               options.backoff_base_ms =
                                   static_cast<int>(int_param_or(params, "backoff_base_ms", 1));
                           }
                           return BackendHandle(std::make_shared<HttpBackend>(options));
                       },
                       "OpenAI-compatible HTTP client (chat + completions)");

    // scalers
    register_if_absent(registry, ComponentKind::Scaler, "identity",
                       [](const ParamMap&) -> std::any {
                           return ScalerHandle(std::make_shared<IdentityScaler>());
                       },
                       "single decode, n = 1");
    register_if_absent(registry, ComponentKind::Scaler, "best_of_n",
                       [](const ParamMap& params) -> std::any {
                           return ScalerHandle(std::make_shared<BestOfNScaler>(
                               static_cast<int>(int_param_or(params, "n", 1))));
                       },
                       "keep the highest length-normalized logprob of n samples");
    register_if_absent(registry, ComponentKind::Scaler, "self_consistency",
                       [](const ParamMap& params) -> std::any {
                           return ScalerHandle(std::make_shared<SelfConsistencyScaler>(
                               static_cast<int>(int_param_or(params, "n", 1))));
                       },
                       "majority vote over extracted answers of n samples");
    register_if_absent(registry, ComponentKind::Scaler, "beam_search",
                       [](const ParamMap& params) -> std::any {
                           return ScalerHandle(std::make_shared<BeamSearchScaler>(
                               static_cast<int>(int_param_or(params, "beam_width", 1)),
                               static_cast<int>(int_param_or(params, "max_steps", 64))));
                       },
                       "beam search over the next-token capability");

    // evaluators
    register_if_absent(registry, ComponentKind::Evaluator, "string_match",
                       [](const ParamMap&) -> std::any {
                           return EvaluatorHandle(std::make_shared<StringMatchEvaluator>());
                       },
                       "normalized string matching with answer extraction");
    register_if_absent(registry, ComponentKind::Evaluator, "log_likelihood",
                       [](const ParamMap&) -> std::any {
                           return EvaluatorHandle(std::make_shared<LogLikelihoodEvaluator>());
                       },
                       "argmax of per-option continuation logprobs");
    register_if_absent(registry, ComponentKind::Evaluator, "math_verify",
                       [](const ParamMap&) -> std::any {
                           return EvaluatorHandle(std::make_shared<MathVerifyEvaluator>());
                       },
                       "numeric equivalence with rational arithmetic");
    register_if_absent(registry, ComponentKind::Evaluator, "llm_judge",
                       [](const ParamMap&) -> std::any {
                           return EvaluatorHandle(std::make_shared<LlmJudgeEvaluator>());
                       },
                       "LLM-as-a-judge with JSON verdict parsing");
}

const Registry& builtin_registry() {
    static const Registry registry = [] {
        Registry r;
        register_builtins(r);
        return r;
    }();
    return registry;
}

namespace {

template <typename Handle>
Handle make_component(const Registry& registry, ComponentKind kind, const std::string& name,
                      const ParamMap& params) {
    const ComponentEntry& entry = registry.resolve(kind, name);
    std::any result = entry.factory(params);
    try {
        return std::any_cast<Handle>(result);
    } catch (const std::bad_any_cast&) {
        throw Error(ErrorKind::Internal,
                    std::string(to_string(kind)) + " factory '" + name +
                        "' produced an unexpected type");
    }
}

}  // namespace

DatasetHandle make_dataset(const Registry& registry, const std::string& name,
                           const ParamMap& params) {
    return make_component<DatasetHandle>(registry, ComponentKind::Dataset, name, params);
}
BackendHandle make_backend(const Registry& registry, const std::string& name,
                           const ParamMap& params) {
    return make_component<BackendHandle>(registry, ComponentKind::Backend, name, params);
}
ScalerHandle make_scaler(const Registry& registry, const std::string& name,
                         const ParamMap& params) {
    return make_component<ScalerHandle>(registry, ComponentKind::Scaler, name, params);
}
EvaluatorHandle make_evaluator(const Registry& registry, const std::string& name,
                               const ParamMap& params) {
    return make_component<EvaluatorHandle>(registry, ComponentKind::Evaluator, name, params);
}

}  // namespace kheval
