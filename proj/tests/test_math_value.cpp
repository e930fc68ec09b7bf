#include <doctest.h>

#include <utility>
#include <vector>

#include "kheval/fixtures.hpp"
#include "kheval/math_value.hpp"

using namespace kheval;

namespace {

MathValue parsed(const std::string& text) {
    auto v = parse_math_value(text);
    REQUIRE_MESSAGE(v.has_value(), "expected '", text, "' to parse");
    return *v;
}

}  // namespace

TEST_CASE("integers with comma separators and unit strips") {
    const MathValue v = parsed("3,000원");
    CHECK(v.exact);
    CHECK(v.num == 3000);
    CHECK(v.den == 1);
    CHECK(parsed("₩12,345").num == 12345);
    CHECK(parsed("5 km").num == 5);
    CHECK(parsed("-42").num == -42);
}

TEST_CASE("latex fragments") {
    const MathValue half = parsed("\\frac{1}{2}");
    CHECK(half.exact);
    CHECK(half.num == 1);
    CHECK(half.den == 2);
    CHECK(parsed("\\frac{-3}{6}") == MathValue::from_rational(-1, 2));
    CHECK(parsed("\\sqrt{16}") == MathValue::from_rational(4, 1));
    CHECK(!parse_math_value("\\sqrt{17}").has_value());  // not a perfect square
    CHECK(parsed("$\\frac{1}{4}$") == MathValue::from_rational(1, 4));
    CHECK(parsed("\\(2\\)") == MathValue::from_rational(2, 1));
}

TEST_CASE("powers") {
    CHECK(parsed("2^10") == MathValue::from_rational(1024, 1));
    CHECK(parsed("2^{3}") == MathValue::from_rational(8, 1));
    CHECK(parsed("10^-2") == MathValue::from_rational(1, 100));
    CHECK(parsed("\\frac{1}{2}^2") == MathValue::from_rational(1, 4));
}

TEST_CASE("percentages") {
    const MathValue v = parsed("35%");
    CHECK(v.exact);
    CHECK(v.as_double() == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(v == MathValue::from_rational(7, 20));
}

TEST_CASE("decimals stay exact rationals") {
    CHECK(parsed("0.5") == MathValue::from_rational(1, 2));
    CHECK(parsed("0.6667") == MathValue::from_rational(6667, 10000));
    CHECK(parsed("-0.25") == MathValue::from_rational(-1, 4));
}

TEST_CASE("very long decimals degrade to double instead of overflowing") {
    const MathValue v = parsed("0.12345678901234567890123");
    CHECK(!v.exact);
    CHECK(v.as_double() == doctest::Approx(0.123456789012345678).epsilon(1e-15));
    const MathValue negative = parsed("-0.99999999999999999999999");
    CHECK(!negative.exact);
    CHECK(negative.as_double() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("plain fractions") {
    CHECK(parsed("1/2") == MathValue::from_rational(1, 2));
    CHECK(parsed("4/8") == MathValue::from_rational(1, 2));
    CHECK(!parse_math_value("1/0").has_value());
}

TEST_CASE("rejects non-values") {
    CHECK(!parse_math_value("서울").has_value());
    CHECK(!parse_math_value("").has_value());
    CHECK(!parse_math_value("1 2").has_value());  // two values, not one
    CHECK(!parse_math_value("abc123def").has_value());
}

TEST_CASE("equality: exact when both rational, tolerance fallback") {
    CHECK(math_values_equal(parsed("1/2"), parsed("0.5")));
    CHECK(math_values_equal(parsed("3000"), parsed("3,000원")));
    // |0.6667 - 2/3| = 1/30000, three orders above the relative tolerance
    CHECK(!math_values_equal(parsed("0.6667"), parsed("2/3")));
    // a high-precision decimal is accepted through the tolerance fallback
    CHECK(math_values_equal(parsed("0.333333333333"), parsed("1/3")));
    CHECK(!math_values_equal(parsed("1/3"), parsed("0.3334")));
}

TEST_CASE("round-trip: parse of to_string is identity on exact rationals") {
    for (const auto& [num, den] : std::vector<std::pair<int, int>>{
             {1, 2}, {-3, 4}, {7, 16}, {21, 100}, {5, 1}, {-11, 3}, {0, 1}}) {
        const MathValue v = MathValue::from_rational(num, den);
        const auto round_tripped = parse_math_value(v.to_string());
        REQUIRE(round_tripped.has_value());
        CHECK(*round_tripped == v);
    }
}

TEST_CASE("round-trip holds for every fixture_math reference") {
    for (const Sample& s : fixture_dataset("fixture_math")) {
        const auto parsed_ref = parse_math_value(s.reference);
        REQUIRE(parsed_ref.has_value());
        CHECK(parsed_ref->exact);
        const auto again = parse_math_value(parsed_ref->to_string());
        REQUIRE(again.has_value());
        CHECK(*again == *parsed_ref);
    }
}
