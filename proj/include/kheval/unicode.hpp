#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kheval::uni {

/// Decodes UTF-8 into code points. Invalid byte sequences decode to U+FFFD,
/// one replacement per offending byte, so decoding never fails.
std::vector<char32_t> decode_utf8(std::string_view text);

std::string encode_utf8(const std::vector<char32_t>& cps);
void append_utf8(std::string& out, char32_t cp);

/// Canonical composition for Hangul: conjoining jamo (U+1100 block) are
/// combined into precomposed syllables per the standard arithmetic mapping.
/// Precomposed Hangul and all non-Hangul code points pass through unchanged,
/// which is exactly NFC behaviour for the Hangul script. Full NFC for other
/// scripts is out of scope; inputs here are Korean, ASCII, and digits.
std::vector<char32_t> compose_hangul(const std::vector<char32_t>& cps);

inline bool is_hangul_syllable(char32_t c) { return c >= 0xAC00 && c <= 0xD7A3; }
inline bool is_hangul_jamo(char32_t c) { return c >= 0x1100 && c <= 0x11FF; }
inline bool is_hangul_compat_jamo(char32_t c) { return c >= 0x3130 && c <= 0x318F; }

inline bool is_hangul(char32_t c) {
    return is_hangul_syllable(c) || is_hangul_jamo(c) || is_hangul_compat_jamo(c);
}

inline bool is_ascii_letter(char32_t c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

/// Letter classifier for the language-consistency ratio denominator.
/// Covers the scripts that plausibly appear in Korean benchmark output:
/// Hangul, Latin (incl. supplements), Greek, Cyrillic, kana, CJK ideographs.
/// Digits, punctuation, whitespace and symbols are deliberately excluded.
bool is_alphabetic(char32_t c);

/// True if `text` contains at least one Hangul syllable (U+AC00..U+D7A3).
bool contains_hangul_syllable(std::string_view text);

}  // namespace kheval::uni
