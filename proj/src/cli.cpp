#include "kheval/cli.hpp"

#include <charconv>
#include <ostream>

#include <nlohmann/json.hpp>

#include "kheval/pipeline.hpp"

namespace kheval {

namespace {

const char* kUsage =
    "usage: kheval [options]\n"
    "  --model NAME               backend component (mock, openai_http)\n"
    "  --dataset NAME             dataset component (generic_jsonl, fixture_*)\n"
    "  --dataset_path PATH        source file for generic_jsonl\n"
    "  --split NAME               train | validation | test\n"
    "  --evaluation_method NAME   string_match | log_likelihood | math_verify | llm_judge\n"
    "  --config PATH              YAML config; flags take precedence\n"
    "  --output PATH              report file (default report.json)\n"
    "  --subset NAME              restrict the run to one subset label\n"
    "  --seed N                   run seed\n"
    "  --list KIND                print registered components and exit\n"
    "                             (datasets | backends | scalers | evaluators)\n"
    "  --help                     show this message\n";

std::optional<ComponentKind> kind_from_flag(const std::string& value) {
    if (value == "datasets" || value == "dataset") return ComponentKind::Dataset;
    if (value == "backends" || value == "backend" || value == "models")
        return ComponentKind::Backend;
    if (value == "scalers" || value == "scaler" || value == "scaling")
        return ComponentKind::Scaler;
    if (value == "evaluators" || value == "evaluator") return ComponentKind::Evaluator;
    return std::nullopt;
}

}  // namespace

CliArgs parse_args(const std::vector<std::string>& argv) {
    CliArgs args;
    auto take_value = [&argv](size_t& i, const std::string& flag) -> std::string {
        if (i + 1 >= argv.size()) {
            throw Error(ErrorKind::UsageError, "flag " + flag + " needs a value");
        }
        return argv[++i];
    };
    for (size_t i = 0; i < argv.size(); ++i) {
        const std::string& flag = argv[i];
        if (flag == "--help" || flag == "-h") {
            args.help_requested = true;
        } else if (flag == "--model") {
            args.model = take_value(i, flag);
        } else if (flag == "--dataset") {
            args.dataset = take_value(i, flag);
        } else if (flag == "--dataset_path") {
            args.dataset_path = take_value(i, flag);
        } else if (flag == "--split") {
            args.split = take_value(i, flag);
        } else if (flag == "--evaluation_method") {
            args.evaluation_method = take_value(i, flag);
        } else if (flag == "--config") {
            args.config_path = take_value(i, flag);
        } else if (flag == "--output") {
            args.output = take_value(i, flag);
        } else if (flag == "--subset") {
            args.subset = take_value(i, flag);
        } else if (flag == "--seed") {
            const std::string value = take_value(i, flag);
            std::uint64_t seed = 0;
            const auto [ptr, ec] =
                std::from_chars(value.data(), value.data() + value.size(), seed);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw Error(ErrorKind::UsageError, "--seed needs an integer, got '" + value + "'");
            }
            args.seed = seed;
        } else if (flag == "--list") {
            args.list_kind = take_value(i, flag);
        } else {
            throw Error(ErrorKind::UsageError, "unknown flag '" + flag + "'");
        }
    }
    return args;
}

EvalConfig merge_args(EvalConfig base, const CliArgs& args) {
    if (args.model) base.default_model = *args.model;
    if (args.dataset) base.default_dataset = *args.dataset;
    if (args.dataset_path) base.dataset_path = *args.dataset_path;
    if (args.split) base.default_split = split_from_string(*args.split);
    if (args.evaluation_method) base.default_evaluation_method = *args.evaluation_method;
    if (args.output) base.output_path = *args.output;
    if (args.subset) base.subset = *args.subset;
    if (args.seed) base.seed = *args.seed;
    return base;
}

int run_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CliArgs args;
    try {
        args = parse_args(argv);
    } catch (const Error& e) {
        err << e.what() << "\n" << kUsage;
        return 2;
    }
    if (args.help_requested) {
        out << kUsage;
        return 0;
    }

    const Registry& registry = builtin_registry();
    if (args.list_kind) {
        const auto kind = kind_from_flag(*args.list_kind);
        if (!kind) {
            err << "UsageError: --list expects datasets/backends/scalers/evaluators, got '"
                << *args.list_kind << "'\n";
            return 2;
        }
        for (const std::string& name : registry.list_components(*kind)) {
            out << name << "\t" << registry.resolve(*kind, name).description << "\n";
        }
        return 0;
    }

    EvalConfig config;
    try {
        if (args.config_path) config = load_config(*args.config_path);
        config = merge_args(std::move(config), args);
        if (config.output_path.empty()) config.output_path = "report.json";
        if (config.default_dataset.empty()) {
            throw Error(ErrorKind::ConfigError,
                        "no dataset selected (--dataset or default_dataset)");
        }
        config.validate();
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        const RunReport report = run(config, registry);
        write_report(report, config.output_path);
        // summary accuracy uses the same float serializer as the report so
        // the two always agree exactly
        out << "accuracy=" << nlohmann::json(report.metrics.accuracy).dump()
            << " n=" << report.verdicts.size()
            << " penalized=" << report.metrics.penalized_count << "\n";
        err << "report written to " << config.output_path << " ("
            << report.timing.wall_ms << " ms, " << report.timing.samples_per_sec
            << " samples/s)\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        if (e.kind() == ErrorKind::TransportError) return 4;
        if (e.stage() == "dataset") return 3;
        if (e.stage() == "config" || e.kind() == ErrorKind::ConfigError ||
            e.kind() == ErrorKind::UsageError) {
            return 2;
        }
        return 5;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 5;
    }
}

}  // namespace kheval
