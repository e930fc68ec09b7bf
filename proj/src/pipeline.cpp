#include "kheval/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

namespace kheval {

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        if (!e.stage().empty()) throw;
        throw Error(e.kind(), e.message(), name);
    }
}

ParamMap backend_params(const EvalConfig& config) {
    ParamMap params;
    params["seed"] = std::to_string(config.seed);
    if (!config.backend.mock_script.empty()) params["script"] = config.backend.mock_script;
    if (!config.backend.base_url.empty()) params["base_url"] = config.backend.base_url;
    params["model_name"] = config.backend.model_name;
    params["timeout_ms"] = std::to_string(config.backend.timeout_ms);
    return params;
}

ParamMap scaler_params(const EvalConfig& config) {
    ParamMap params;
    params["n"] = std::to_string(config.scaling.n);
    params["beam_width"] = std::to_string(config.scaling.beam_width);
    params["max_steps"] = std::to_string(config.scaling.max_steps);
    return params;
}

ParamMap dataset_params(const EvalConfig& config) {
    ParamMap params;
    if (!config.dataset_path.empty()) params["path"] = config.dataset_path;
    params["split"] = to_string(config.default_split);
    return params;
}

}  // namespace

RunReport run(const EvalConfig& config) { return run(config, builtin_registry()); }

RunReport run(const EvalConfig& config, const Registry& registry) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();

    // (1) dataset loading
    std::vector<Sample> samples = stage("dataset", [&] {
        DatasetHandle handle =
            make_dataset(registry, config.default_dataset, dataset_params(config));
        std::vector<Sample> loaded = *handle;
        if (config.subset) loaded = filter_subset(loaded, *config.subset);
        return loaded;
    });

    // (2) model setup
    BackendHandle backend = stage("model_setup", [&] {
        BackendHandle b = make_backend(registry, config.default_model, backend_params(config));
        b->probe();
        return b;
    });

    // (3) + (4) inference and evaluation, per sample
    EvaluatorHandle evaluator = stage("evaluation", [&] {
        return make_evaluator(registry, config.default_evaluation_method, ParamMap{});
    });
    ScalerHandle scaler = stage("inference", [&] {
        return make_scaler(registry, config.scaling.method, scaler_params(config));
    });

    GenerationParams gen_params;
    gen_params.temperature = config.scaling.method == "identity" ? 0.0
                                                                 : config.scaling.temperature;
    gen_params.seed = config.seed;
    EvalOptions eval_opts;
    eval_opts.language_penalty_threshold = config.evaluation.language_penalty_threshold;
    eval_opts.judge_template = config.evaluation.judge_template;
    eval_opts.length_normalize = config.evaluation.length_normalize;

    auto process = [&](const Sample& sample) -> Verdict {
        const char* phase = "inference";
        try {
            std::string output;
            if (evaluator->needs_generation()) {
                output = scaler->run(generation_prompt(sample), *backend, gen_params).final.text;
            }
            phase = "evaluation";
            Verdict verdict = evaluator->evaluate(sample, output, *backend, eval_opts);
            const double ratio = hangul_ratio(verdict.raw_output);
            return apply_language_penalty(std::move(verdict), ratio,
                                          eval_opts.language_penalty_threshold);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::TransportError) {
                // infra failure: count the sample as incorrect instead of
                // dropping it or aborting the run
                Verdict verdict;
                verdict.sample_id = sample.id;
                verdict.method = config.default_evaluation_method;
                verdict.correct = false;
                verdict.score = 0.0;
                verdict.infra_error = true;
                return verdict;
            }
            throw Error(e.kind(), e.message() + " (sample_id=" + sample.id + ")",
                        e.stage().empty() ? phase : e.stage());
        }
    };

    std::vector<Verdict> verdicts(samples.size());
    const size_t total = samples.size();
    const auto batch = static_cast<size_t>(config.batch_size);
    for (size_t wave_begin = 0; wave_begin < total; wave_begin += batch) {
        const size_t wave_end = std::min(total, wave_begin + batch);
        const size_t wave_size = wave_end - wave_begin;
        const size_t workers =
            std::min<size_t>(static_cast<size_t>(config.max_workers), wave_size);

        if (workers <= 1) {
            for (size_t i = wave_begin; i < wave_end; ++i) verdicts[i] = process(samples[i]);
            continue;
        }

        std::atomic<size_t> next{wave_begin};
        std::atomic<bool> failed{false};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const size_t i = next.fetch_add(1);
                if (i >= wave_end) break;
                try {
                    verdicts[i] = process(samples[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    // (5) reporting
    RunReport report;
    report.config_snapshot = config;
    report.run_id = compute_run_id(config);
    report.verdicts = std::move(verdicts);

    int correct = 0;
    for (const Verdict& v : report.verdicts) {
        if (v.correct) ++correct;
        if (v.penalty_applied) ++report.metrics.penalized_count;
        if (v.judge_valid && !*v.judge_valid) ++report.metrics.invalid_judge_count;
        if (v.infra_error) ++report.metrics.infra_error_count;
    }
    report.metrics.accuracy =
        report.verdicts.empty()
            ? 0.0
            : static_cast<double>(correct) / static_cast<double>(report.verdicts.size());
    report.diagnostics = stage("reporting", [&] {
        return compute_diagnostics(samples, report.verdicts);
    });

    const auto elapsed = std::chrono::steady_clock::now() - start;
    report.timing.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
    report.timing.samples_per_sec =
        report.timing.wall_ms > 0.0
            ? static_cast<double>(report.verdicts.size()) / (report.timing.wall_ms / 1000.0)
            : 0.0;
    return report;
}

ComparisonReport run_multi_model(const std::vector<EvalConfig>& configs) {
    return run_multi_model(configs, builtin_registry());
}

ComparisonReport run_multi_model(const std::vector<EvalConfig>& configs,
                                 const Registry& registry) {
    if (configs.empty()) {
        throw Error(ErrorKind::Precondition, "run_multi_model needs at least one config");
    }
    const EvalConfig& first = configs.front();
    for (const EvalConfig& config : configs) {
        const bool same_dataset = config.default_dataset == first.default_dataset &&
                                  config.dataset_path == first.dataset_path &&
                                  config.default_split == first.default_split &&
                                  config.subset == first.subset;
        if (!same_dataset ||
            config.default_evaluation_method != first.default_evaluation_method) {
            throw Error(ErrorKind::HeterogeneousConfigs,
                        "multi-model comparison requires identical dataset and evaluation "
                        "method across configs");
        }
    }

    ComparisonReport comparison;
    for (const EvalConfig& config : configs) {
        RunReport report = run(config, registry);
        ComparisonRow row;
        row.model = config.backend.model_name;
        row.accuracy = report.metrics.accuracy;
        row.penalized_count = report.metrics.penalized_count;
        row.sample_count = static_cast<int>(report.verdicts.size());
        comparison.rows.push_back(std::move(row));
        comparison.reports.push_back(std::move(report));
    }
    std::sort(comparison.rows.begin(), comparison.rows.end(),
              [](const ComparisonRow& a, const ComparisonRow& b) {
                  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
                  return a.model < b.model;
              });
    return comparison;
}

}  // namespace kheval
