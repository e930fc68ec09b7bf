#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kheval/dataset.hpp"
#include "kheval/mock_backend.hpp"

namespace kheval {

/// Bundled synthetic datasets: real benchmarks are external data, so the
/// harness ships small deterministic stand-ins for tests and demos.
///   fixture_mcq  - 40 four-option items, answer letters balanced 10/10/10/10
///   fixture_math - 20 items whose references are fractions with terminating
///                  decimal expansions
///   fixture_gen  - 20 open-ended Korean items with gold keywords
std::vector<Sample> fixture_dataset(const std::string& name);

/// Scripted mock outputs keyed by Sample::input.
///   fixture_mcq               - letter answers, correct on 30 of 40 items
///   fixture_math_decimal      - every answer given in decimal form
///   fixture_math_half_english - decimal answers, odd items in English
///   fixture_gen               - free-form Korean answers, 15 of 20 correct
std::map<std::string, std::string> fixture_script_outputs(const std::string& script);

/// Deterministic total logprob for every (context, option) pair of
/// fixture_mcq. The mock backend serves these through score_continuation;
/// oracle tests recompute the argmax directly from this table.
std::map<std::pair<std::string, std::string>, double> fixture_mcq_scoring_table();

/// Mock backend preloaded with a bundled script ("" or "default" for the
/// unscripted mock). Unknown script names are an error.
std::shared_ptr<MockBackend> make_scripted_mock(const std::string& script, std::uint64_t seed);

}  // namespace kheval
