#include "kheval/text.hpp"

#include <algorithm>
#include <cctype>

#include "kheval/unicode.hpp"

namespace kheval {

namespace {

bool is_strip_punct(char32_t c) {
    switch (c) {
        case '.': case ',': case ':': case ';': case '!': case '?':
        case '"': case '\'': case '(': case ')': case '[': case ']':
            return true;
        default:
            return false;
    }
}

bool is_space_cp(char32_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' ||
           c == 0x00A0 || c == 0x3000;  // NBSP and ideographic space
}

bool ascii_ieq(char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
}

/// Case-insensitive rfind for ASCII needles; Hangul bytes compare exactly.
size_t rfind_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return std::string::npos;
    for (size_t start = haystack.size() - needle.size() + 1; start-- > 0;) {
        bool match = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (!ascii_ieq(haystack[start + j], needle[j])) { match = false; break; }
        }
        if (match) return start;
    }
    return std::string::npos;
}

bool is_ascii_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string normalize_text(const std::string& text) {
    std::vector<char32_t> cps = uni::compose_hangul(uni::decode_utf8(text));

    std::vector<char32_t> collapsed;
    collapsed.reserve(cps.size());
    bool pending_space = false;
    for (char32_t c : cps) {
        if (is_space_cp(c)) {
            pending_space = !collapsed.empty();
            continue;
        }
        if (pending_space) {
            collapsed.push_back(' ');
            pending_space = false;
        }
        if (c >= 'A' && c <= 'Z') c = c - 'A' + 'a';
        collapsed.push_back(c);
    }
    size_t begin = 0, end = collapsed.size();
    while (begin < end && (is_strip_punct(collapsed[begin]) || collapsed[begin] == ' ')) ++begin;
    while (end > begin && (is_strip_punct(collapsed[end - 1]) || collapsed[end - 1] == ' ')) --end;
    return uni::encode_utf8(std::vector<char32_t>(collapsed.begin() + begin,
                                                  collapsed.begin() + end));
}

const ExtractionRules& default_extraction_rules() {
    static const ExtractionRules rules;
    return rules;
}

std::string extract_answer(const std::string& text) {
    return extract_answer(text, default_extraction_rules());
}

std::string extract_answer(const std::string& text, const ExtractionRules& rules) {
    if (text.empty()) return "";

    // Rule 1: tail after the rightmost marker occurrence.
    size_t best_tail = std::string::npos;
    for (const std::string& marker : rules.markers) {
        const size_t pos = rfind_ci(text, marker);
        if (pos == std::string::npos) continue;
        const size_t tail = pos + marker.size();
        if (best_tail == std::string::npos || tail > best_tail) best_tail = tail;
    }
    if (best_tail != std::string::npos) {
        return normalize_text(text.substr(best_tail));
    }

    // Rule 2: last standalone option letter A-E.
    for (size_t i = text.size(); i-- > 0;) {
        const char c = text[i];
        if (c < 'A' || c > 'E') continue;
        const bool left_ok = (i == 0) || !is_ascii_alnum(text[i - 1]);
        const bool right_ok = (i + 1 == text.size()) || !is_ascii_alnum(text[i + 1]);
        if (left_ok && right_ok) return normalize_text(std::string(1, c));
    }

    // Rule 3: last number. Numbers may carry comma groups, a decimal part,
    // and an immediate /denominator so fractions survive as one token.
    size_t num_begin = std::string::npos, num_end = std::string::npos;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            size_t start = i;
            if (start > 0 && (text[start - 1] == '+' || text[start - 1] == '-')) --start;
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            while (j + 3 < text.size() && text[j] == ',' &&
                   std::isdigit(static_cast<unsigned char>(text[j + 1])) &&
                   std::isdigit(static_cast<unsigned char>(text[j + 2])) &&
                   std::isdigit(static_cast<unsigned char>(text[j + 3])) &&
                   (j + 4 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[j + 4])))) {
                j += 4;
            }
            if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            if (j < text.size() && text[j] == '/' && j + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            num_begin = start;
            num_end = j;
            i = j;
        } else {
            ++i;
        }
    }
    if (num_begin != std::string::npos) {
        return normalize_text(text.substr(num_begin, num_end - num_begin));
    }

    // Rule 4: the whole text.
    return normalize_text(text);
}

double hangul_ratio(const std::string& text) {
    size_t hangul = 0, letters = 0;
    for (char32_t c : uni::decode_utf8(text)) {
        if (!uni::is_alphabetic(c)) continue;
        ++letters;
        if (uni::is_hangul(c)) ++hangul;
    }
    if (letters == 0) return 1.0;
    return static_cast<double>(hangul) / static_cast<double>(letters);
}

}  // namespace kheval
