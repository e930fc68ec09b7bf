#include "kheval/unicode.hpp"

namespace kheval::uni {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Hangul composition constants from the Unicode standard.
constexpr char32_t kLBase = 0x1100, kVBase = 0x1161, kTBase = 0x11A7;
constexpr char32_t kSBase = 0xAC00;
constexpr int kLCount = 19, kVCount = 21, kTCount = 28;

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
        else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
        else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
        else { out.push_back(kReplacement); ++i; continue; }

        if (i + len > n) { out.push_back(kReplacement); ++i; continue; }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(text[i + k]);
            if ((bk & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (bk & 0x3F);
        }
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        // reject overlong encodings
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 3);
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::vector<char32_t> compose_hangul(const std::vector<char32_t>& cps) {
    std::vector<char32_t> out;
    out.reserve(cps.size());
    for (char32_t c : cps) {
        if (!out.empty()) {
            const char32_t prev = out.back();
            // L + V -> LV
            if (prev >= kLBase && prev < kLBase + kLCount && c >= kVBase && c < kVBase + kVCount) {
                out.back() = kSBase + ((prev - kLBase) * kVCount + (c - kVBase)) * kTCount;
                continue;
            }
            // LV + T -> LVT
            if (prev >= kSBase && prev <= 0xD7A3 && (prev - kSBase) % kTCount == 0 &&
                c > kTBase && c < kTBase + kTCount) {
                out.back() = prev + (c - kTBase);
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

bool is_alphabetic(char32_t c) {
    if (is_hangul(c)) return true;
    if (is_ascii_letter(c)) return true;
    // Latin-1 letters minus multiplication/division signs.
    if (c >= 0x00C0 && c <= 0x00FF && c != 0x00D7 && c != 0x00F7) return true;
    if (c >= 0x0100 && c <= 0x024F) return true;  // Latin Extended A/B
    if (c >= 0x0391 && c <= 0x03C9 && c != 0x03A2) return true;  // Greek
    if (c >= 0x0400 && c <= 0x04FF) return true;  // Cyrillic
    if (c >= 0x3040 && c <= 0x309F) return true;  // Hiragana
    if (c >= 0x30A0 && c <= 0x30FF) return true;  // Katakana
    if (c >= 0x4E00 && c <= 0x9FFF) return true;  // CJK unified ideographs
    if (c >= 0xA960 && c <= 0xA97F) return true;  // Hangul Jamo Extended-A
    if (c >= 0xD7B0 && c <= 0xD7FF) return true;  // Hangul Jamo Extended-B
    return false;
}

bool contains_hangul_syllable(std::string_view text) {
    for (char32_t c : decode_utf8(text))
        if (is_hangul_syllable(c)) return true;
    return false;
}

}  // namespace kheval::uni
