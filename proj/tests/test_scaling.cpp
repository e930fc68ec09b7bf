#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kheval/scaling.hpp"
#include "kheval/text.hpp"
#include "test_support.hpp"

using namespace kheval;
using kheval::test::FixedBackend;
using kheval::test::make_candidate;

namespace {

AnswerExtractor default_extractor() {
    return [](const std::string& text) { return extract_answer(text); };
}

}  // namespace

TEST_CASE("identity_decode wraps a single generate call") {
    MockBackend backend(0);
    backend.set_answer("q", "정답: 첫 후보");
    GenerationParams params;
    const ScalingOutcome outcome = identity_decode("q", backend, params);
    CHECK(outcome.method == "identity");
    CHECK(outcome.final.text == "정답: 첫 후보");
    REQUIRE(outcome.all_candidates.size() == 1);
    CHECK(outcome.all_candidates[0].text == outcome.final.text);
    CHECK(!outcome.vote_tally.has_value());
}

TEST_CASE("best_of_n picks the best length-normalized logprob") {
    FixedBackend backend;
    backend.canned = {
        make_candidate("첫째", {-1.2}),
        make_candidate("둘째", {-0.8}),
        make_candidate("셋째", {-3.0}),
    };
    GenerationParams params;
    const ScalingOutcome outcome = best_of_n("q", backend, params, 3);
    CHECK(outcome.method == "best_of_n");
    CHECK(outcome.final.text == "둘째");

    SUBCASE("normalization divides by token count") {
        // raw cumulative prefers the long candidate, normalized does not
        backend.canned = {
            make_candidate("short", {-1.0}),
            make_candidate("long", {-0.3, -0.3, -0.3, -0.3}),  // cumulative -1.2, norm -0.3
        };
        CHECK(best_of_n("q", backend, params, 2).final.text == "long");
    }
    SUBCASE("exact ties go to the lower index") {
        backend.canned = {make_candidate("a", {-1.0}), make_candidate("b", {-1.0})};
        CHECK(best_of_n("q", backend, params, 2).final.text == "a");
    }
    SUBCASE("n=1 equals identity_decode") {
        const auto one = best_of_n("q", backend, params, 1);
        const auto ident = identity_decode("q", backend, params);
        CHECK(one.final.text == ident.final.text);
    }
    SUBCASE("missing cumulative logprob is an error") {
        Candidate bare;
        bare.text = "no logprobs";
        backend.canned = {bare, bare};
        CHECK_THROWS_AS(best_of_n("q", backend, params, 2), Error);
    }
    SUBCASE("n=0 violates the precondition") {
        CHECK_THROWS_AS(best_of_n("q", backend, params, 0), Error);
    }
}

TEST_CASE("self_consistency majority voting") {
    FixedBackend backend;
    backend.canned = {
        make_candidate("정답: 4", {-1.0}),
        make_candidate("그러므로 정답: 4", {-1.0}),
        make_candidate("정답: 5", {-1.0}),
    };
    GenerationParams params;
    const ScalingOutcome outcome =
        self_consistency("q", backend, params, 3, default_extractor());
    CHECK(outcome.method == "self_consistency");
    CHECK(extract_answer(outcome.final.text) == "4");
    REQUIRE(outcome.vote_tally.has_value());
    CHECK(outcome.vote_tally->at("4") == 2);
    CHECK(outcome.vote_tally->at("5") == 1);

    SUBCASE("ties break to the first occurrence") {
        backend.canned = {make_candidate("정답: a", {-1.0}), make_candidate("정답: b", {-1.0})};
        const auto tied = self_consistency("q", backend, params, 2, default_extractor());
        CHECK(extract_answer(tied.final.text) == "a");
    }
    SUBCASE("empty extraction participates as the empty answer") {
        backend.canned = {make_candidate("", {-1.0}), make_candidate("", {-1.0}),
                          make_candidate("정답: 1", {-1.0})};
        const auto voted = self_consistency("q", backend, params, 3, default_extractor());
        CHECK(voted.vote_tally->at("") == 2);
        CHECK(voted.final.text.empty());
    }
    SUBCASE("n=1 equals identity_decode") {
        const auto one = self_consistency("q", backend, params, 1, default_extractor());
        CHECK(one.final.text == identity_decode("q", backend, params).final.text);
    }
}

TEST_CASE("self_consistency winner is permutation-invariant under strict majority") {
    std::vector<std::string> texts = {"정답: 4", "정답: 4", "정답: 4", "정답: 5", "정답: 7"};
    std::mt19937 rng(123);
    GenerationParams params;
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(texts.begin(), texts.end(), rng);
        FixedBackend backend;
        for (const std::string& t : texts) backend.canned.push_back(make_candidate(t, {-1.0}));
        const auto outcome = self_consistency("q", backend, params, 5, default_extractor());
        CHECK(extract_answer(outcome.final.text) == "4");
    }
}

TEST_CASE("majority-of-5 beats a single draw on the stochastic mock") {
    // exact enumeration oracle over all 4^5 ordered outcomes
    const std::vector<double> weights = {0.4, 0.2, 0.2, 0.2};
    const double exact5 = kheval::test::exact_vote_accuracy(weights, 5);
    const double exact1 = kheval::test::exact_vote_accuracy(weights, 1);
    CHECK(exact1 == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(exact5 > 0.5);

    // modest empirical run; the acceptance suite runs the full comparison
    MockBackend backend(0);
    const std::vector<std::string> answers = {"정답: 4", "정답: 1", "정답: 2", "정답: 3"};
    GenerationParams params;
    params.temperature = 0.7;
    int hits = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const std::string prompt = "확률 문제 " + std::to_string(t);
        backend.set_stochastic(prompt, {answers, weights});
        params.seed = 7;
        const auto outcome = self_consistency(prompt, backend, params, 5, default_extractor());
        if (extract_answer(outcome.final.text) == "4") ++hits;
    }
    const double empirical = static_cast<double>(hits) / trials;
    CHECK(empirical > 0.4);  // coarse bound here; tight bound in acceptance
}

TEST_CASE("beam_width=1 equals greedy decoding") {
    MockBackend backend(0);
    ChainModel chain;
    chain.prompt = "P";
    chain.initial = {{"a", 0.5}, {"b", 0.4}};
    chain.transitions["a"] = {{"a", 0.2}, {"$", 0.5}, {"b", 0.3}};
    chain.transitions["b"] = {{"$", 0.9}, {"a", 0.1}};
    backend.set_chain_model(chain);

    // independent greedy rollout over the same chain
    std::string greedy_text;
    double greedy_logprob = 0.0;
    {
        std::string prefix = "P";
        for (int step = 0; step < 8; ++step) {
            const auto top = backend.next_token_topk(prefix, 1);
            greedy_logprob += top[0].second;
            if (top[0].first == "$") break;
            greedy_text += top[0].first;
            prefix += top[0].first;
        }
    }
    const ScalingOutcome outcome = beam_search("P", backend, 1, 8);
    CHECK(outcome.method == "beam_search");
    CHECK(outcome.final.text == greedy_text);
    CHECK(*outcome.final.cumulative_logprob == doctest::Approx(greedy_logprob).epsilon(1e-12));
}

TEST_CASE("beam_width=2 recovers the better non-greedy path") {
    // greedy path has logprob ln(0.5*0.1); the alternative ln(0.4*0.9) wins
    MockBackend backend(0);
    ChainModel chain;
    chain.prompt = "P";
    chain.initial = {{"a", 0.5}, {"b", 0.4}};
    chain.transitions["a"] = {{"$", 0.1}};
    chain.transitions["b"] = {{"$", 0.9}};
    backend.set_chain_model(chain);

    const ScalingOutcome greedy = beam_search("P", backend, 1, 4);
    CHECK(greedy.final.text == "a");
    CHECK(*greedy.final.cumulative_logprob ==
          doctest::Approx(std::log(0.5 * 0.1)).epsilon(1e-12));

    const ScalingOutcome wide = beam_search("P", backend, 2, 4);
    CHECK(wide.final.text == "b");
    CHECK(*wide.final.cumulative_logprob ==
          doctest::Approx(std::log(0.4 * 0.9)).epsilon(1e-12));
}

TEST_CASE("beam search at vocabulary width matches exhaustive enumeration") {
    MockBackend backend(0);
    ChainModel chain;
    chain.prompt = "P";
    chain.initial = {{"a", 0.40}, {"b", 0.35}, {"c", 0.15}, {"d", 0.05}, {"$", 0.05}};
    chain.transitions["a"] = {{"a", 0.05}, {"b", 0.05}, {"c", 0.40}, {"d", 0.30}, {"$", 0.20}};
    chain.transitions["b"] = {{"a", 0.05}, {"b", 0.05}, {"c", 0.10}, {"d", 0.10}, {"$", 0.70}};
    chain.transitions["c"] = {{"a", 0.05}, {"b", 0.10}, {"c", 0.45}, {"d", 0.10}, {"$", 0.30}};
    chain.transitions["d"] = {{"a", 0.10}, {"b", 0.10}, {"c", 0.10}, {"d", 0.10}, {"$", 0.60}};
    backend.set_chain_model(chain);

    const auto best = kheval::test::best_path_by_enumeration(chain, 4);
    const ScalingOutcome outcome = beam_search("P", backend, 5, 4);
    CHECK(*outcome.final.cumulative_logprob == doctest::Approx(best.logprob).epsilon(1e-9));

    std::string best_text;
    for (const std::string& tok : best.tokens) {
        if (tok != chain.eos) best_text += tok;
    }
    CHECK(outcome.final.text == best_text);
}

TEST_CASE("beam search rejects bad parameters and missing capability") {
    MockBackend backend(0);
    CHECK_THROWS_AS(beam_search("P", backend, 0, 4), Error);
    CHECK_THROWS_AS(beam_search("P", backend, 2, 0), Error);
}
