#pragma once

#include <memory>
#include <vector>

#include "kheval/backend.hpp"
#include "kheval/dataset.hpp"
#include "kheval/evaluators.hpp"
#include "kheval/registry.hpp"
#include "kheval/scaling.hpp"

namespace kheval {

// Factory result types, by kind.
using DatasetHandle = std::shared_ptr<const std::vector<Sample>>;
using BackendHandle = std::shared_ptr<Backend>;
using ScalerHandle = std::shared_ptr<const Scaler>;
using EvaluatorHandle = std::shared_ptr<const Evaluator>;

/// Registers every built-in component. Idempotent: names that are already
/// present are left untouched, so repeated initialization is harmless.
void register_builtins(Registry& registry);

/// Process-wide registry, built once on first use and immutable afterwards.
const Registry& builtin_registry();

// Typed resolution helpers around Registry::resolve + factory invocation.
DatasetHandle make_dataset(const Registry& registry, const std::string& name,
                           const ParamMap& params);
BackendHandle make_backend(const Registry& registry, const std::string& name,
                           const ParamMap& params);
ScalerHandle make_scaler(const Registry& registry, const std::string& name,
                         const ParamMap& params);
EvaluatorHandle make_evaluator(const Registry& registry, const std::string& name,
                               const ParamMap& params);

}  // namespace kheval
