#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kheval/config.hpp"
#include "kheval/diagnostics.hpp"
#include "kheval/evaluators.hpp"

namespace kheval {

struct Metrics {
    double accuracy = 0.0;
    int penalized_count = 0;
    int invalid_judge_count = 0;
    int infra_error_count = 0;
};

struct Timing {
    double wall_ms = 0.0;
    double samples_per_sec = 0.0;
};

/// Aggregate result of one run. `timing` is execution metadata: it is
/// reported on the CLI but deliberately kept out of the canonical report
/// file so identical runs produce byte-identical artifacts. run_id is a
/// deterministic digest of the resolved config, not a random token, for the
/// same reason.
struct RunReport {
    std::string run_id;
    EvalConfig config_snapshot;
    Metrics metrics;
    DiagnosticsReport diagnostics;
    std::vector<Verdict> verdicts;  // dataset order, regardless of interleaving
    Timing timing;
};

nlohmann::json config_to_json(const EvalConfig& config);
nlohmann::json verdict_to_json(const Verdict& verdict);
nlohmann::json diagnostics_to_json(const DiagnosticsReport& diagnostics);

/// Canonical payload: sorted keys, shortest round-trip floats, UTF-8 with
/// Hangul unescaped. Timing is excluded (see RunReport).
nlohmann::json report_to_json(const RunReport& report);

/// Canonical serialization: two-space indent, LF, single trailing newline.
std::string canonical_bytes(const nlohmann::json& payload);
std::string report_bytes(const RunReport& report);

void write_report(const RunReport& report, const std::string& path);

std::string compute_run_id(const EvalConfig& config);

// -- multi-model comparison ---------------------------------------------------

struct ComparisonRow {
    std::string model;
    double accuracy = 0.0;
    int penalized_count = 0;
    int sample_count = 0;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;  // sorted by accuracy descending
    std::vector<RunReport> reports;   // one per input config, input order
};

nlohmann::json comparison_to_json(const ComparisonReport& report);

}  // namespace kheval
