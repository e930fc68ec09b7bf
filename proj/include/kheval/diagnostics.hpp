#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kheval/dataset.hpp"
#include "kheval/evaluators.hpp"

namespace kheval {

struct SubsetStat {
    double accuracy = 0.0;
    int n = 0;
};

struct KeywordStat {
    int omitted = 0;
    int occurrences = 0;
};

struct DiagnosticsReport {
    double accuracy = 0.0;
    std::map<std::string, int> prediction_distribution;
    std::map<std::string, SubsetStat> subset_accuracy;
    double ttr_correct = 0.0;
    double ttr_incorrect = 0.0;
    std::map<std::string, KeywordStat> keyword_omission;
};

struct MorphemeSegmentation {
    std::vector<std::string> tokens;
    int particle_suffixes_stripped = 0;
};

/// The bundled particle list, ordered longest-first. Same content as the
/// data/particles.txt file shipped with the repo.
const std::vector<std::string>& default_particle_list();

/// Parses a particle list file: UTF-8, one suffix per line, longest first.
std::vector<std::string> load_particle_list(const std::string& path);

/// Rule-based segmentation: each whitespace-delimited eojeol sheds at most
/// one particle from the list (first match wins in list order) provided the
/// remaining stem keeps at least one Hangul syllable. Stems and particles
/// concatenate back to the original eojeol; non-Hangul eojeols pass through.
MorphemeSegmentation segment_morphemes(const std::string& text);
MorphemeSegmentation segment_morphemes(const std::string& text,
                                       const std::vector<std::string>& particles);

/// Distinct tokens / total tokens; 0.0 for empty input.
double ttr(const std::vector<std::string>& tokens);

std::pair<double, std::map<std::string, int>> performance_overview(
    const std::vector<Verdict>& verdicts);

/// Per-subset accuracy; samples without a subset group under "_unlabeled".
/// Throws AlignmentError if a verdict's sample_id is missing from samples.
std::map<std::string, SubsetStat> subset_accuracy(const std::vector<Sample>& samples,
                                                  const std::vector<Verdict>& verdicts);

/// Pools the morpheme tokens of all raw outputs per correctness group and
/// computes one TTR per pooled group; per-sample TTR on short answers is
/// degenerate.
std::pair<double, double> ttr_by_correctness(const std::vector<Sample>& samples,
                                             const std::vector<Verdict>& verdicts);

/// Counts, for each gold keyword, how many of its samples' outputs miss it
/// (normalized substring containment). Only samples with keywords take part.
std::map<std::string, KeywordStat> keyword_omission(const std::vector<Sample>& samples,
                                                    const std::vector<Verdict>& verdicts);

DiagnosticsReport compute_diagnostics(const std::vector<Sample>& samples,
                                      const std::vector<Verdict>& verdicts);

}  // namespace kheval
