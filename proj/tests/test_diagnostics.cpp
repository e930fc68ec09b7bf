#include <doctest.h>

#include <random>

#include "kheval/diagnostics.hpp"
#include "kheval/fixtures.hpp"
#include "kheval/unicode.hpp"

using namespace kheval;

namespace {

Verdict make_verdict(std::string id, bool correct, std::string extracted = "",
                     std::string raw_output = "") {
    Verdict v;
    v.sample_id = std::move(id);
    v.correct = correct;
    v.extracted = std::move(extracted);
    v.raw_output = std::move(raw_output);
    return v;
}

Sample make_sample(std::string id, std::optional<std::string> subset = std::nullopt,
                   std::vector<std::string> keywords = {}) {
    Sample s;
    s.id = std::move(id);
    s.input = "q";
    s.reference = "r";
    s.subset = std::move(subset);
    s.keywords = std::move(keywords);
    return s;
}

}  // namespace

TEST_CASE("performance_overview accuracy and distribution") {
    std::vector<Verdict> verdicts = {
        make_verdict("a", true, "a"), make_verdict("b", true, "a"),
        make_verdict("c", true, "b"), make_verdict("d", false, "c")};
    auto [accuracy, distribution] = performance_overview(verdicts);
    CHECK(accuracy == 0.75);
    CHECK(distribution.at("a") == 2);
    CHECK(distribution.at("b") == 1);
    CHECK(distribution.at("c") == 1);

    auto [empty_acc, empty_dist] = performance_overview({});
    CHECK(empty_acc == 0.0);
    CHECK(empty_dist.empty());
}

TEST_CASE("subset_accuracy groups and checks alignment") {
    std::vector<Sample> samples = {make_sample("a", "s1"), make_sample("b", "s1"),
                                   make_sample("c", "s2"), make_sample("d", "s2")};
    std::vector<Verdict> verdicts = {make_verdict("a", true), make_verdict("b", true),
                                     make_verdict("c", false), make_verdict("d", false)};
    auto stats = subset_accuracy(samples, verdicts);
    CHECK(stats.at("s1").accuracy == 1.0);
    CHECK(stats.at("s1").n == 2);
    CHECK(stats.at("s2").accuracy == 0.0);
    CHECK(stats.at("s2").n == 2);

    SUBCASE("unlabeled samples group under _unlabeled") {
        std::vector<Sample> unlabeled = {make_sample("a"), make_sample("b")};
        std::vector<Verdict> vs = {make_verdict("a", true), make_verdict("b", false)};
        auto grouped = subset_accuracy(unlabeled, vs);
        CHECK(grouped.size() == 1);
        CHECK(grouped.at("_unlabeled").n == 2);
        CHECK(grouped.at("_unlabeled").accuracy == 0.5);
    }
    SUBCASE("verdict with unknown sample_id is an alignment error") {
        std::vector<Verdict> bad = {make_verdict("zz", true)};
        CHECK_THROWS_AS(subset_accuracy(samples, bad), Error);
    }
}

TEST_CASE("segment_morphemes strips at most one particle per eojeol") {
    auto seg = segment_morphemes("학교에서 공부를 한다");
    CHECK(seg.tokens == std::vector<std::string>{"학교", "에서", "공부", "를", "한다"});
    CHECK(seg.particle_suffixes_stripped == 2);

    CHECK(segment_morphemes("서울은").tokens == std::vector<std::string>{"서울", "은"});
    // stem-length guard: a bare particle stays whole
    CHECK(segment_morphemes("은").tokens == std::vector<std::string>{"은"});
    // non-Hangul eojeols pass through unchanged
    CHECK(segment_morphemes("hello world").tokens ==
          std::vector<std::string>{"hello", "world"});
    CHECK(segment_morphemes("ABC는").tokens == std::vector<std::string>{"ABC는"});
    CHECK(segment_morphemes("").tokens.empty());
    // longest particle wins: 에서는 before 는
    CHECK(segment_morphemes("학교에서는").tokens ==
          std::vector<std::string>{"학교", "에서는"});
}

TEST_CASE("segmentation reconstruction invariant on random Hangul text") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> syllable(0xAC00, 0xD7A3);
    std::uniform_int_distribution<int> word_len(1, 5);
    std::uniform_int_distribution<int> word_count(1, 8);

    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> eojeols;
        std::string text;
        const int words = word_count(rng);
        for (int w = 0; w < words; ++w) {
            std::vector<char32_t> cps;
            const int len = word_len(rng);
            for (int i = 0; i < len; ++i) cps.push_back(static_cast<char32_t>(syllable(rng)));
            eojeols.push_back(uni::encode_utf8(cps));
            if (w) text += ' ';
            text += eojeols.back();
        }
        const auto seg = segment_morphemes(text);
        // stems + particles concatenate back to the original eojeols
        std::string rebuilt;
        for (const std::string& token : seg.tokens) rebuilt += token;
        std::string original;
        for (const std::string& e : eojeols) original += e;
        REQUIRE(rebuilt == original);
    }
}

TEST_CASE("ttr basics and properties") {
    CHECK(ttr({"a", "b", "a", "c"}) == 0.75);
    CHECK(ttr({"x", "x", "x", "x"}) == 0.25);
    CHECK(ttr({}) == 0.0);
    CHECK(ttr({"단어"}) == 1.0);

    // permutation invariance and (0,1] range
    std::vector<std::string> tokens = {"가", "나", "가", "다", "라", "나"};
    const double before = ttr(tokens);
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(tokens.begin(), tokens.end(), rng);
        CHECK(ttr(tokens) == before);
    }
    CHECK(before > 0.0);
    CHECK(before <= 1.0);
}

TEST_CASE("ttr_by_correctness pools tokens per group") {
    // outputs "가 나" and "가 다" pool to 4 tokens, 3 types -> 0.75
    std::vector<Sample> samples = {make_sample("a"), make_sample("b"), make_sample("c")};
    std::vector<Verdict> verdicts = {make_verdict("a", true, "", "가 나"),
                                     make_verdict("b", true, "", "가 다"),
                                     make_verdict("c", false, "", "")};
    auto [correct, incorrect] = ttr_by_correctness(samples, verdicts);
    CHECK(correct == 0.75);
    CHECK(incorrect == 0.0);  // empty pool

    SUBCASE("identical groups give equal TTRs") {
        std::vector<Verdict> both = {make_verdict("a", true, "", "가 나"),
                                     make_verdict("b", false, "", "가 나")};
        std::vector<Sample> two = {make_sample("a"), make_sample("b")};
        auto [c, i] = ttr_by_correctness(two, both);
        CHECK(c == i);
    }
}

TEST_CASE("keyword_omission counts presence after normalization") {
    std::vector<Sample> samples = {
        make_sample("a", std::nullopt, {"세종대왕"}),
        make_sample("b", std::nullopt, {"세종대왕"}),
        make_sample("c", std::nullopt, {"세종대왕"}),
        make_sample("d", std::nullopt, {"한글"}),
    };
    std::vector<Verdict> verdicts = {
        make_verdict("a", true, "", "세종대왕이 만들었다"),
        make_verdict("b", true, "", "그 왕은 글자를 만들었다"),      // omitted
        make_verdict("c", false, "", "누군지 모른다"),               // omitted
        make_verdict("d", true, "", "한  글")  // spacing differs: still omitted
    };
    auto stats = keyword_omission(samples, verdicts);
    CHECK(stats.at("세종대왕").occurrences == 3);
    CHECK(stats.at("세종대왕").omitted == 2);
    CHECK(stats.at("한글").omitted == 1);

    SUBCASE("spacing normalized on both sides counts as present") {
        std::vector<Sample> one = {make_sample("a", std::nullopt, {"세종 대왕"})};
        std::vector<Verdict> vs = {make_verdict("a", true, "", "세종   대왕의 업적")};
        CHECK(keyword_omission(one, vs).at("세종 대왕").omitted == 0);
    }
    SUBCASE("samples without keywords do not participate") {
        std::vector<Sample> none = {make_sample("a")};
        std::vector<Verdict> vs = {make_verdict("a", true, "", "아무거나")};
        CHECK(keyword_omission(none, vs).empty());
    }
}

TEST_CASE("keyword occurrence counts grow monotonically with added samples") {
    std::vector<Sample> samples;
    std::vector<Verdict> verdicts;
    std::map<std::string, KeywordStat> previous;
    for (int i = 0; i < 6; ++i) {
        samples.push_back(make_sample("s" + std::to_string(i), std::nullopt, {"키워드"}));
        verdicts.push_back(make_verdict("s" + std::to_string(i), i % 2 == 0, "",
                                        i % 3 == 0 ? "키워드 있음" : "없음"));
        auto current = keyword_omission(samples, verdicts);
        for (const auto& [kw, stat] : previous) {
            CHECK(current.at(kw).occurrences >= stat.occurrences);
        }
        previous = std::move(current);
    }
}

TEST_CASE("fixture_gen diagnostics equal independently hand-computed values") {
    const auto samples = fixture_dataset("fixture_gen");
    const auto outputs = fixture_script_outputs("fixture_gen");
    std::vector<Verdict> verdicts;
    for (const Sample& s : samples) {
        verdicts.push_back(string_match_eval(s, outputs.at(s.input)));
    }
    const DiagnosticsReport report = compute_diagnostics(samples, verdicts);

    // frozen from the independent recount of the scripted outputs:
    // correct pool 75 tokens / 57 types, incorrect pool 29 tokens / 23 types
    CHECK(report.accuracy == 0.75);
    CHECK(report.ttr_correct == doctest::Approx(57.0 / 75.0).epsilon(1e-12));
    CHECK(report.ttr_incorrect == doctest::Approx(23.0 / 29.0).epsilon(1e-12));

    CHECK(report.keyword_omission.at("제주도").omitted == 2);
    CHECK(report.keyword_omission.at("제주도").occurrences == 2);
    CHECK(report.keyword_omission.at("한글날").omitted == 1);
    CHECK(report.keyword_omission.at("훈민정음").omitted == 0);
    CHECK(report.keyword_omission.at("설날").omitted == 0);

    CHECK(report.subset_accuracy.at("history").n == 5);
    CHECK(report.subset_accuracy.at("geography").n == 5);
}

TEST_CASE("bundled particle file matches the compiled-in list") {
    const auto from_file =
        load_particle_list(std::string(KHEVAL_SOURCE_DIR) + "/data/particles.txt");
    CHECK(from_file == default_particle_list());
}
