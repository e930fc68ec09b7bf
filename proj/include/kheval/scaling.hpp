#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kheval/backend.hpp"

namespace kheval {

struct ScalingOutcome {
    Candidate final;
    std::vector<Candidate> all_candidates;
    std::string method;
    std::optional<std::map<std::string, int>> vote_tally;
};

/// Maps candidate text to a normalized answer string for voting.
using AnswerExtractor = std::function<std::string(const std::string&)>;

/// Single generate call with n = 1.
ScalingOutcome identity_decode(const std::string& prompt, Backend& backend,
                               const GenerationParams& params);

/// Samples n candidates and keeps the one with the highest length-normalized
/// cumulative logprob (cumulative / token count); raw cumulative would
/// systematically favor short outputs. Exact ties go to the lower index.
ScalingOutcome best_of_n(const std::string& prompt, Backend& backend,
                         const GenerationParams& params, int n);

/// Samples n candidates, extracts an answer from each, and majority-votes.
/// Ties between answer groups go to the answer whose first occurrence index
/// is smallest. Empty extractions vote as "" rather than aborting.
ScalingOutcome self_consistency(const std::string& prompt, Backend& backend,
                                const GenerationParams& params, int n,
                                const AnswerExtractor& extractor);

/// Beam search over the backend's next-token capability. Beams finishing on
/// the end-of-sequence token are frozen; the search stops when every beam is
/// finished or max_steps is reached. No length penalty. The final candidate
/// is the best finished beam, or the best unfinished one if none finished.
ScalingOutcome beam_search(const std::string& prompt, Backend& backend, int beam_width,
                           int max_steps, const std::string& eos_token = "$");

// -- registry adapter ---------------------------------------------------------

class Scaler {
public:
    virtual ~Scaler() = default;
    virtual std::string name() const = 0;
    virtual ScalingOutcome run(const std::string& prompt, Backend& backend,
                               const GenerationParams& params) const = 0;
};

}  // namespace kheval
