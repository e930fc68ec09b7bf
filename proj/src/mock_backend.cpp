#include "kheval/mock_backend.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "kheval/hash.hpp"
#include "kheval/text.hpp"

namespace kheval {

using nlohmann::json;

namespace {

/// Deterministic choice of an option letter for unscripted MCQ prompts.
char pick_letter(std::uint64_t seed, const std::string& prompt, int option_count) {
    const std::uint64_t h = splitmix64(seed ^ fnv1a64(prompt));
    return static_cast<char>('A' + static_cast<int>(h % static_cast<std::uint64_t>(option_count)));
}

int count_rendered_options(const std::string& prompt) {
    int count = 0;
    for (char letter = 'A'; letter <= 'E'; ++letter) {
        if (prompt.find(std::string("\n") + letter + ") ") != std::string::npos) ++count;
    }
    return count;
}

std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n') {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace

double mock_token_logprob(std::uint64_t seed, const std::string& context,
                          const std::string& token, size_t index) {
    const std::uint64_t h =
        splitmix64(seed ^ fnv1a64(context) ^ splitmix64(fnv1a64(token) + index));
    return -(0.1 + unit_double(h) * 2.9);  // in [-3.0, -0.1)
}

void MockBackend::set_answer(const std::string& key, const std::string& output) {
    answers_[key] = output;
}

void MockBackend::set_stochastic(const std::string& key, StochasticAnswers answers) {
    stochastic_[key] = std::move(answers);
}

void MockBackend::set_score(const std::string& prompt, const std::string& continuation,
                            std::vector<TokenLogprob> tokens) {
    scores_[{prompt, continuation}] = std::move(tokens);
}

void MockBackend::set_chain_model(ChainModel model) { chain_ = std::move(model); }

void MockBackend::push_judge_response(const std::string& response) {
    std::lock_guard<std::mutex> lock(mutex_);
    judge_script_.push_back(response);
}

GenerationParams MockBackend::last_judge_params() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return last_judge_params_;
}

const std::string* MockBackend::find_by_substring(const std::map<std::string, std::string>& table,
                                                  const std::string& prompt) const {
    const std::string* best = nullptr;
    size_t best_len = 0;
    for (const auto& [key, value] : table) {
        if (prompt.find(key) == std::string::npos) continue;
        if (best == nullptr || key.size() > best_len) {
            best = &value;
            best_len = key.size();
        }
    }
    return best;
}

const StochasticAnswers* MockBackend::find_stochastic(const std::string& prompt) const {
    const StochasticAnswers* best = nullptr;
    size_t best_len = 0;
    for (const auto& [key, value] : stochastic_) {
        if (prompt.find(key) == std::string::npos) continue;
        if (best == nullptr || key.size() > best_len) {
            best = &value;
            best_len = key.size();
        }
    }
    return best;
}

std::string MockBackend::default_answer(const std::string& prompt) const {
    const int options = count_rendered_options(prompt);
    if (options >= 2) {
        return std::string("정답: ") + pick_letter(seed_, prompt, options);
    }
    return "정답: 0";
}

std::vector<Candidate> MockBackend::generate_impl(const std::string& prompt,
                                                  const GenerationParams& params) {
    std::vector<Candidate> out;
    out.reserve(static_cast<size_t>(params.n));

    if (const StochasticAnswers* sa = find_stochastic(prompt)) {
        double total = 0.0;
        for (double w : sa->weights) total += w;
        if (params.temperature == 0.0) {
            // argmax answer, deterministic regardless of seed
            size_t best = 0;
            for (size_t i = 1; i < sa->weights.size(); ++i) {
                if (sa->weights[i] > sa->weights[best]) best = i;
            }
            for (int i = 0; i < params.n; ++i) {
                Candidate c;
                c.text = sa->answers[best];
                c.token_logprobs = {{c.text, std::log(sa->weights[best] / total)}};
                c.cumulative_logprob = c.token_logprobs[0].logprob;
                out.push_back(std::move(c));
            }
            return out;
        }
        std::uint64_t state = splitmix64(params.seed.value_or(seed_) ^ fnv1a64(prompt));
        for (int i = 0; i < params.n; ++i) {
            state = splitmix64(state);
            const double u = unit_double(state) * total;
            double acc = 0.0;
            size_t idx = sa->answers.size() - 1;
            for (size_t j = 0; j < sa->weights.size(); ++j) {
                acc += sa->weights[j];
                if (u < acc) { idx = j; break; }
            }
            Candidate c;
            c.text = sa->answers[idx];
            c.token_logprobs = {{c.text, std::log(sa->weights[idx] / total)}};
            c.cumulative_logprob = c.token_logprobs[0].logprob;
            out.push_back(std::move(c));
        }
        return out;
    }

    std::string text;
    if (const std::string* scripted = find_by_substring(answers_, prompt)) {
        text = *scripted;
    } else {
        text = default_answer(prompt);
    }
    for (int i = 0; i < params.n; ++i) {
        Candidate c;
        c.text = text;
        c.token_logprobs = {{text, mock_token_logprob(seed_, prompt, text, 0)}};
        c.cumulative_logprob = c.token_logprobs[0].logprob;
        out.push_back(std::move(c));
    }
    return out;
}

std::pair<double, std::vector<TokenLogprob>> MockBackend::score_continuation(
    const std::string& prompt, const std::string& continuation) {
    if (continuation.empty()) {
        throw Error(ErrorKind::Precondition, "continuation must be nonempty");
    }
    auto it = scores_.find({prompt, continuation});
    std::vector<TokenLogprob> tokens;
    if (it != scores_.end()) {
        tokens = it->second;
    } else {
        const auto words = whitespace_tokens(continuation);
        size_t index = 0;
        for (const std::string& w : words.empty() ? std::vector<std::string>{continuation} : words) {
            tokens.push_back({w, mock_token_logprob(seed_, prompt, w, index)});
            ++index;
        }
    }
    double total = 0.0;
    for (const TokenLogprob& t : tokens) total += t.logprob;
    return {total, tokens};
}

std::vector<ScoredToken> MockBackend::next_token_topk(const std::string& prefix, int k) {
    if (k < 1) throw Error(ErrorKind::Precondition, "k must be >= 1");

    std::vector<std::pair<std::string, double>> dist;
    if (chain_) {
        std::string suffix = prefix;
        if (!chain_->prompt.empty() && prefix.rfind(chain_->prompt, 0) == 0) {
            suffix = prefix.substr(chain_->prompt.size());
        }
        if (suffix.empty()) {
            dist = chain_->initial;
        } else {
            // state = longest vocabulary token that suffixes the generation
            std::string state;
            auto consider = [&](const std::string& tok) {
                if (tok.size() > state.size() && suffix.size() >= tok.size() &&
                    suffix.compare(suffix.size() - tok.size(), tok.size(), tok) == 0) {
                    state = tok;
                }
            };
            for (const auto& [tok, trans] : chain_->transitions) consider(tok);
            for (const auto& [tok, w] : chain_->initial) consider(tok);
            auto it = chain_->transitions.find(state);
            if (it != chain_->transitions.end()) {
                dist = it->second;
            } else {
                dist = {{chain_->eos, 1.0}};  // dead end: always finish
            }
        }
    } else {
        // Unscripted fallback: a deterministic distribution over a small
        // Hangul vocabulary plus end-of-sequence, keyed by the prefix.
        static const std::vector<std::string> vocab = {"가", "나", "다", "$"};
        const std::uint64_t h = splitmix64(seed_ ^ fnv1a64(prefix));
        for (size_t i = 0; i < vocab.size(); ++i) {
            double w = 0.05 + 0.6 * unit_double(splitmix64(h + i));
            if (vocab[i] == "$") w += 0.3;  // bias toward finishing
            dist.emplace_back(vocab[i], w);
        }
    }

    // Weights are used raw (they need not sum to 1); logprob = ln(weight).
    std::vector<ScoredToken> scored;
    scored.reserve(dist.size());
    for (const auto& [tok, w] : dist) scored.emplace_back(tok, std::log(w));
    std::sort(scored.begin(), scored.end(), [](const ScoredToken& a, const ScoredToken& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<size_t>(k) < scored.size()) scored.resize(static_cast<size_t>(k));
    return scored;
}

Candidate MockBackend::judge_impl(const std::string& judge_prompt,
                                  const GenerationParams& params) {
    ++judge_calls_;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        last_judge_params_ = params;
        if (!judge_script_.empty()) {
            Candidate c;
            c.text = judge_script_.front();
            judge_script_.pop_front();
            return c;
        }
    }
    // Built-in judge: pull the reference and response sections out of the
    // rendered template and test for normalized containment.
    auto section = [&judge_prompt](const std::string& header,
                                   const std::string& terminator) -> std::string {
        const size_t h = judge_prompt.find(header);
        if (h == std::string::npos) return "";
        const size_t begin = h + header.size();
        const size_t end = judge_prompt.find(terminator, begin);
        if (end == std::string::npos) return judge_prompt.substr(begin);
        return judge_prompt.substr(begin, end - begin);
    };
    const std::string reference = section("[기준 답안]\n", "\n\n[모델 응답]");
    const std::string response = section("[모델 응답]\n", "\n\n판정 결과");

    json verdict;
    if (reference.empty()) {
        verdict["correct"] = false;
        verdict["reason"] = "형식을 해석할 수 없음";
    } else {
        const bool hit =
            normalize_text(response).find(normalize_text(reference)) != std::string::npos;
        verdict["correct"] = hit;
        verdict["reason"] = hit ? "기준 답안 포함" : "기준 답안 불일치";
    }
    Candidate c;
    c.text = verdict.dump();
    return c;
}

}  // namespace kheval
