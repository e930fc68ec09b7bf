#pragma once

#include <vector>

#include "kheval/builtins.hpp"
#include "kheval/config.hpp"
#include "kheval/report.hpp"

namespace kheval {

/// Runs the five-stage workflow: dataset loading, model setup, inference
/// (scaling), evaluation (with language penalty), and reporting. Verdicts
/// are written into slots indexed by sample position, so their order equals
/// dataset order regardless of worker interleaving; with the mock backend
/// and a fixed seed the result is identical across max_workers settings.
/// Stage failures abort with the stage name attached; per-sample transport
/// failures after retries mark the sample incorrect with infra_error set
/// instead of aborting, so denominators never silently change.
RunReport run(const EvalConfig& config);
RunReport run(const EvalConfig& config, const Registry& registry);

/// Runs each config and builds a side-by-side table keyed by model name,
/// rows ordered by accuracy descending. All configs must agree on dataset
/// and evaluation method.
ComparisonReport run_multi_model(const std::vector<EvalConfig>& configs);
ComparisonReport run_multi_model(const std::vector<EvalConfig>& configs,
                                 const Registry& registry);

}  // namespace kheval
