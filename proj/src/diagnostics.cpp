#include "kheval/diagnostics.hpp"

#include <fstream>
#include <set>
#include <unordered_map>

#include "kheval/error.hpp"
#include "kheval/text.hpp"
#include "kheval/unicode.hpp"

namespace kheval {

const std::vector<std::string>& default_particle_list() {
    static const std::vector<std::string> particles = {
        "에서는", "으로는", "까지", "부터", "에서", "에게", "께서", "으로", "은", "는",
        "이",     "가",     "을",   "를",   "에",   "의",   "와",   "과",   "도", "만",
        "로",
    };
    return particles;
}

std::vector<std::string> load_particle_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open particle list '" + path + "'");
    std::vector<std::string> particles;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) particles.push_back(line);
    }
    return particles;
}

MorphemeSegmentation segment_morphemes(const std::string& text) {
    return segment_morphemes(text, default_particle_list());
}

MorphemeSegmentation segment_morphemes(const std::string& text,
                                       const std::vector<std::string>& particles) {
    MorphemeSegmentation seg;
    std::string eojeol;
    auto flush = [&]() {
        if (eojeol.empty()) return;
        for (const std::string& particle : particles) {
            if (eojeol.size() <= particle.size()) continue;
            if (eojeol.compare(eojeol.size() - particle.size(), particle.size(), particle) != 0)
                continue;
            const std::string stem = eojeol.substr(0, eojeol.size() - particle.size());
            if (!uni::contains_hangul_syllable(stem)) continue;
            seg.tokens.push_back(stem);
            seg.tokens.push_back(particle);
            ++seg.particle_suffixes_stripped;
            eojeol.clear();
            return;
        }
        seg.tokens.push_back(eojeol);
        eojeol.clear();
    };
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
            flush();
        } else {
            eojeol.push_back(c);
        }
    }
    flush();
    return seg;
}

double ttr(const std::vector<std::string>& tokens) {
    if (tokens.empty()) return 0.0;
    std::set<std::string> types(tokens.begin(), tokens.end());
    return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

std::pair<double, std::map<std::string, int>> performance_overview(
    const std::vector<Verdict>& verdicts) {
    std::map<std::string, int> distribution;
    if (verdicts.empty()) return {0.0, distribution};
    int correct = 0;
    for (const Verdict& v : verdicts) {
        if (v.correct) ++correct;
        ++distribution[v.extracted];
    }
    return {static_cast<double>(correct) / static_cast<double>(verdicts.size()),
            std::move(distribution)};
}

namespace {

const Sample& sample_for(const std::unordered_map<std::string, const Sample*>& by_id,
                         const Verdict& verdict) {
    auto it = by_id.find(verdict.sample_id);
    if (it == by_id.end()) {
        throw Error(ErrorKind::AlignmentError,
                    "verdict sample_id '" + verdict.sample_id + "' not present in samples");
    }
    return *it->second;
}

std::unordered_map<std::string, const Sample*> index_samples(const std::vector<Sample>& samples) {
    std::unordered_map<std::string, const Sample*> by_id;
    by_id.reserve(samples.size());
    for (const Sample& s : samples) by_id.emplace(s.id, &s);
    return by_id;
}

}  // namespace

std::map<std::string, SubsetStat> subset_accuracy(const std::vector<Sample>& samples,
                                                  const std::vector<Verdict>& verdicts) {
    const auto by_id = index_samples(samples);
    std::map<std::string, std::pair<int, int>> counts;  // subset -> (correct, total)
    for (const Verdict& v : verdicts) {
        const Sample& s = sample_for(by_id, v);
        const std::string key = s.subset ? *s.subset : "_unlabeled";
        auto& [correct, total] = counts[key];
        ++total;
        if (v.correct) ++correct;
    }
    std::map<std::string, SubsetStat> out;
    for (const auto& [key, pair] : counts) {
        out[key] = {pair.second == 0 ? 0.0
                                     : static_cast<double>(pair.first) /
                                           static_cast<double>(pair.second),
                    pair.second};
    }
    return out;
}

std::pair<double, double> ttr_by_correctness(const std::vector<Sample>& samples,
                                             const std::vector<Verdict>& verdicts) {
    const auto by_id = index_samples(samples);
    std::vector<std::string> correct_pool, incorrect_pool;
    for (const Verdict& v : verdicts) {
        sample_for(by_id, v);  // alignment check
        auto seg = segment_morphemes(v.raw_output);
        auto& pool = v.correct ? correct_pool : incorrect_pool;
        pool.insert(pool.end(), seg.tokens.begin(), seg.tokens.end());
    }
    return {ttr(correct_pool), ttr(incorrect_pool)};
}

std::map<std::string, KeywordStat> keyword_omission(const std::vector<Sample>& samples,
                                                    const std::vector<Verdict>& verdicts) {
    const auto by_id = index_samples(samples);
    std::map<std::string, KeywordStat> out;
    for (const Verdict& v : verdicts) {
        const Sample& s = sample_for(by_id, v);
        if (s.keywords.empty()) continue;
        const std::string output_norm = normalize_text(v.raw_output);
        for (const std::string& keyword : s.keywords) {
            KeywordStat& stat = out[keyword];
            ++stat.occurrences;
            if (output_norm.find(normalize_text(keyword)) == std::string::npos) {
                ++stat.omitted;
            }
        }
    }
    return out;
}

DiagnosticsReport compute_diagnostics(const std::vector<Sample>& samples,
                                      const std::vector<Verdict>& verdicts) {
    DiagnosticsReport report;
    auto [accuracy, distribution] = performance_overview(verdicts);
    report.accuracy = accuracy;
    report.prediction_distribution = std::move(distribution);
    report.subset_accuracy = subset_accuracy(samples, verdicts);
    auto [correct, incorrect] = ttr_by_correctness(samples, verdicts);
    report.ttr_correct = correct;
    report.ttr_incorrect = incorrect;
    report.keyword_omission = keyword_omission(samples, verdicts);
    return report;
}

}  // namespace kheval
