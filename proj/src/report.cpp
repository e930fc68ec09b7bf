#include "kheval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "kheval/hash.hpp"
#include "kheval/version.hpp"

namespace kheval {

using nlohmann::json;

json config_to_json(const EvalConfig& config) {
    json j;
    j["default_dataset"] = config.default_dataset;
    j["default_model"] = config.default_model;
    j["default_split"] = to_string(config.default_split);
    j["default_evaluation_method"] = config.default_evaluation_method;
    j["batch_size"] = config.batch_size;
    j["max_workers"] = config.max_workers;
    j["scaling"] = {{"method", config.scaling.method},
                    {"n", config.scaling.n},
                    {"beam_width", config.scaling.beam_width},
                    {"max_steps", config.scaling.max_steps},
                    {"temperature", config.scaling.temperature}};
    j["evaluation"] = {{"language_penalty_threshold", config.evaluation.language_penalty_threshold},
                       {"judge_template", config.evaluation.judge_template},
                       {"length_normalize", config.evaluation.length_normalize}};
    j["backend"] = {{"base_url", config.backend.base_url},
                    {"model_name", config.backend.model_name},
                    {"timeout_ms", config.backend.timeout_ms},
                    {"mock_script", config.backend.mock_script}};
    j["seed"] = config.seed;
    j["output_path"] = config.output_path;
    if (config.subset) j["subset"] = *config.subset;
    if (!config.dataset_path.empty()) j["dataset_path"] = config.dataset_path;
    return j;
}

json verdict_to_json(const Verdict& v) {
    json j;
    j["sample_id"] = v.sample_id;
    j["raw_output"] = v.raw_output;
    j["extracted"] = v.extracted;
    j["correct"] = v.correct;
    if (v.score) j["score"] = *v.score;
    j["penalty_applied"] = v.penalty_applied;
    j["hangul_ratio"] = v.hangul_ratio;
    j["method"] = v.method;
    if (v.judge_raw) j["judge_raw"] = *v.judge_raw;
    if (v.judge_valid) j["judge_valid"] = *v.judge_valid;
    j["infra_error"] = v.infra_error;
    return j;
}

json diagnostics_to_json(const DiagnosticsReport& d) {
    json j;
    j["accuracy"] = d.accuracy;
    j["prediction_distribution"] = json::object();
    for (const auto& [answer, count] : d.prediction_distribution) {
        j["prediction_distribution"][answer] = count;
    }
    j["subset_accuracy"] = json::object();
    for (const auto& [subset, stat] : d.subset_accuracy) {
        j["subset_accuracy"][subset] = {{"accuracy", stat.accuracy}, {"n", stat.n}};
    }
    j["ttr_correct"] = d.ttr_correct;
    j["ttr_incorrect"] = d.ttr_incorrect;

    // Keyword stats are reported as an array ordered by omission rate
    // descending (keyword ascending on ties); a JSON object would lose the
    // ordering to key sorting.
    std::vector<std::pair<std::string, KeywordStat>> keywords(d.keyword_omission.begin(),
                                                              d.keyword_omission.end());
    std::sort(keywords.begin(), keywords.end(), [](const auto& a, const auto& b) {
        const double ra = a.second.occurrences
                              ? static_cast<double>(a.second.omitted) / a.second.occurrences
                              : 0.0;
        const double rb = b.second.occurrences
                              ? static_cast<double>(b.second.omitted) / b.second.occurrences
                              : 0.0;
        if (ra != rb) return ra > rb;
        return a.first < b.first;
    });
    j["keyword_omission"] = json::array();
    for (const auto& [keyword, stat] : keywords) {
        j["keyword_omission"].push_back({{"keyword", keyword},
                                         {"omitted", stat.omitted},
                                         {"occurrences", stat.occurrences}});
    }
    return j;
}

json report_to_json(const RunReport& report) {
    json j;
    j["run_id"] = report.run_id;
    j["config_snapshot"] = config_to_json(report.config_snapshot);
    j["metrics"] = {{"accuracy", report.metrics.accuracy},
                    {"penalized_count", report.metrics.penalized_count},
                    {"invalid_judge_count", report.metrics.invalid_judge_count},
                    {"infra_error_count", report.metrics.infra_error_count}};
    j["diagnostics"] = diagnostics_to_json(report.diagnostics);
    j["verdicts"] = json::array();
    for (const Verdict& v : report.verdicts) j["verdicts"].push_back(verdict_to_json(v));
    j["versions"] = {{"harness_version", kHarnessVersion},
                     {"extraction_rules_version", kExtractionRulesVersion},
                     {"particle_list_version", kParticleListVersion}};
    return j;
}

std::string canonical_bytes(const json& payload) {
    return payload.dump(2) + "\n";
}

std::string report_bytes(const RunReport& report) {
    return canonical_bytes(report_to_json(report));
}

void write_report(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open report path '" + path + "'");
    out << report_bytes(report);
    if (!out) throw Error(ErrorKind::IoError, "failed writing report to '" + path + "'");
}

std::string compute_run_id(const EvalConfig& config) {
    // Concurrency knobs are execution layout, not run identity: results are
    // invariant under them, so two runs differing only there share an id.
    json identity = config_to_json(config);
    identity.erase("batch_size");
    identity.erase("max_workers");
    const std::string canonical = canonical_bytes(identity);
    const std::uint64_t h = splitmix64(fnv1a64(canonical) ^ fnv1a64(kHarnessVersion));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json comparison_to_json(const ComparisonReport& report) {
    json j;
    j["rows"] = json::array();
    for (const ComparisonRow& row : report.rows) {
        j["rows"].push_back({{"model", row.model},
                             {"accuracy", row.accuracy},
                             {"penalized_count", row.penalized_count},
                             {"n", row.sample_count}});
    }
    j["reports"] = json::array();
    for (const RunReport& r : report.reports) j["reports"].push_back(report_to_json(r));
    return j;
}

}  // namespace kheval
