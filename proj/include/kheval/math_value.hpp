#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace kheval {

/// Canonical numeric value: an exact rational while the arithmetic stays in
/// 64-bit range, a double once it cannot. All grammar productions (decimals,
/// comma-grouped integers, \frac, \sqrt of perfect squares, integer powers,
/// percentages) yield exact rationals unless they overflow.
struct MathValue {
    bool exact = true;
    std::int64_t num = 0;
    std::int64_t den = 1;   // > 0, gcd(num, den) == 1 when exact
    double approx = 0.0;    // always valid; equals num/den when exact

    static MathValue from_rational(std::int64_t num, std::int64_t den);
    static MathValue from_double(double value);

    double as_double() const { return approx; }

    /// "a/b" for non-integral rationals, plain integer otherwise; doubles
    /// render with shortest round-trip formatting. parse_math_value of the
    /// result reproduces the value exactly for exact rationals.
    std::string to_string() const;
};

bool operator==(const MathValue& a, const MathValue& b);

/// Parses one numeric answer: optional sign, comma-grouped integers,
/// decimals, a/b fractions, \frac{a}{b}, \sqrt{n} for perfect squares,
/// base^k with integer k, trailing percent, with surrounding currency/unit
/// tokens and math delimiters stripped. Returns nullopt when the text is
/// not recognized as a single numeric value.
std::optional<MathValue> parse_math_value(const std::string& text);

/// Equality test used by mathematical verification: exact when both sides
/// are exact rationals, otherwise |a-b| <= max(1e-9, 1e-6 * max(|a|,|b|)).
/// A failed exact comparison still falls through to the numeric tolerance so
/// a high-precision decimal is not rejected on representation alone.
bool math_values_equal(const MathValue& a, const MathValue& b);

}  // namespace kheval
