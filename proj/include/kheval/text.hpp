#pragma once

#include <string>
#include <vector>

namespace kheval {

/// Canonical text form used for all string comparisons: Hangul NFC
/// composition, whitespace runs collapsed to a single space, trimmed,
/// Latin letters folded to lowercase, and leading/trailing punctuation
/// from the set .,:;!?"'()[] stripped. Hangul is left byte-identical.
std::string normalize_text(const std::string& text);

/// Ordered answer-extraction rules, first match wins:
///   1. text after the last occurrence of an answer marker
///   2. last standalone option letter A-E
///   3. last number in the text (comma groups, decimals, a/b fractions)
///   4. the whole trimmed text
/// The result is always normalize_text'ed.
struct ExtractionRules {
    std::vector<std::string> markers = {"정답:", "정답은", "답:", "Answer:", "answer is"};
};

const ExtractionRules& default_extraction_rules();

std::string extract_answer(const std::string& text, const ExtractionRules& rules);
std::string extract_answer(const std::string& text);

/// Hangul code points (U+AC00-D7A3, U+1100-11FF, U+3130-318F) over all
/// alphabetic code points. Digits, punctuation, whitespace and symbols do
/// not count toward the denominator; a text with no letters at all scores
/// 1.0 so purely numeric output is never penalized.
double hangul_ratio(const std::string& text);

}  // namespace kheval
