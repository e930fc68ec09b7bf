#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "kheval/dataset.hpp"
#include "kheval/error.hpp"
#include "kheval/fixtures.hpp"

using namespace kheval;

namespace {

std::string write_temp(const std::string& content) {
    static int counter = 0;
    std::string path = "kheval_test_dataset_" + std::to_string(counter++) + ".jsonl";
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_jsonl parses plain and MCQ lines") {
    const std::string path = write_temp(
        "{\"id\":\"q1\",\"input\":\"2+2=?\",\"reference\":\"4\"}\n"
        "{\"id\":\"q2\",\"input\":\"수도는?\",\"options\":[\"A) 서울\",\"B) 부산\"],"
        "\"reference\":\"A\"}\n");
    const auto samples = load_jsonl(path);
    std::remove(path.c_str());

    REQUIRE(samples.size() == 2);
    CHECK(samples[0].id == "q1");
    CHECK(samples[0].options.empty());
    CHECK(!samples[0].reference_index.has_value());
    CHECK(samples[1].is_mcq());
    CHECK(samples[1].reference == "A");
    REQUIRE(samples[1].reference_index.has_value());
    CHECK(*samples[1].reference_index == 0);  // letter normalized to index at load
}

TEST_CASE("missing reference aborts the load with the line number") {
    const std::string path = write_temp(
        "{\"id\":\"q1\",\"input\":\"a\",\"reference\":\"1\"}\n"
        "{\"id\":\"q2\",\"input\":\"b\",\"reference\":\"2\"}\n"
        "{\"id\":\"q3\",\"input\":\"c\"}\n");
    try {
        load_jsonl(path);
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SchemaError);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("reference") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("unknown JSON keys are preserved in metadata") {
    const std::string path = write_temp(
        "{\"id\":\"q1\",\"input\":\"a\",\"reference\":\"1\",\"difficulty\":\"hard\","
        "\"year\":2024}\n");
    const auto samples = load_jsonl(path);
    std::remove(path.c_str());
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].metadata.at("difficulty") == "hard");
    CHECK(samples[0].metadata.at("year") == "2024");
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(load_jsonl("does_not_exist.jsonl"), Error);
}

TEST_CASE("jsonl round-trip reproduces the sample list") {
    for (const char* fixture : {"fixture_mcq", "fixture_math", "fixture_gen"}) {
        const auto samples = fixture_dataset(fixture);
        const auto reloaded = parse_jsonl(to_jsonl(samples));
        CHECK(reloaded == samples);
    }
}

TEST_CASE("filter_subset preserves order and matches exactly") {
    auto samples = fixture_dataset("fixture_mcq");  // subsets cycle over three labels
    const auto filtered = filter_subset(samples, "reasoning");
    CHECK(filtered.size() == 14);  // 40 items, labels cycle with period 3
    for (size_t i = 0; i < filtered.size(); ++i) {
        CHECK(*filtered[i].subset == "reasoning");
    }
    // order preserved
    CHECK(filtered.front().id == "mcq_000");
    CHECK(filtered.back().id == "mcq_039");

    CHECK(filter_subset(samples, "nonexistent").empty());

    // subset "" matches only explicit empty labels
    CHECK(filter_subset(samples, "").empty());
    samples[0].subset = "";
    CHECK(filter_subset(samples, "").size() == 1);
}

TEST_CASE("validate_dataset names offending ids") {
    auto samples = fixture_dataset("fixture_gen");
    CHECK_NOTHROW(validate_dataset(samples));

    SUBCASE("duplicate id") {
        samples[3].id = samples[0].id;
        try {
            validate_dataset(samples);
            FAIL("expected ValidationError");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ValidationError);
            CHECK(std::string(e.what()).find(samples[0].id) != std::string::npos);
        }
    }
    SUBCASE("letter reference out of range") {
        Sample bad;
        bad.id = "bad_mcq";
        bad.input = "?";
        bad.options = {"A) 1", "B) 2"};
        bad.reference = "C";
        try {
            validate_dataset({bad});
            FAIL("expected ValidationError");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ValidationError);
            CHECK(std::string(e.what()).find("bad_mcq") != std::string::npos);
        }
    }
}

TEST_CASE("fixture shapes match their contracts") {
    const auto mcq = fixture_dataset("fixture_mcq");
    REQUIRE(mcq.size() == 40);
    std::map<int, int> letter_counts;
    for (const Sample& s : mcq) {
        REQUIRE(s.options.size() == 4);
        REQUIRE(s.reference_index.has_value());
        ++letter_counts[*s.reference_index];
    }
    for (int letter = 0; letter < 4; ++letter) CHECK(letter_counts[letter] == 10);

    const auto math = fixture_dataset("fixture_math");
    REQUIRE(math.size() == 20);
    for (const Sample& s : math) {
        CHECK(s.reference.find('/') != std::string::npos);  // fractional references
    }

    const auto gen = fixture_dataset("fixture_gen");
    REQUIRE(gen.size() == 20);
    for (const Sample& s : gen) {
        CHECK(!s.keywords.empty());
    }
}
