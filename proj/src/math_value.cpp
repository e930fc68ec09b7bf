#include "kheval/math_value.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

namespace kheval {

namespace {

bool mul_overflow(std::int64_t a, std::int64_t b, std::int64_t* out) {
    return __builtin_mul_overflow(a, b, out);
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    bool consume(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }
    bool consume(const std::string& tok) {
        if (s.compare(pos, tok.size(), tok) == 0) { pos += tok.size(); return true; }
        return false;
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
};

std::optional<std::int64_t> parse_plain_int(Cursor& c, bool allow_sign = true) {
    size_t start = c.pos;
    bool neg = false;
    if (allow_sign && (c.peek() == '+' || c.peek() == '-')) neg = c.s[c.pos++] == '-';
    if (!is_digit(c.peek())) { c.pos = start; return std::nullopt; }
    std::int64_t v = 0;
    while (is_digit(c.peek())) {
        if (mul_overflow(v, 10, &v) || __builtin_add_overflow(v, c.s[c.pos] - '0', &v)) {
            c.pos = start;
            return std::nullopt;
        }
        ++c.pos;
    }
    return neg ? -v : v;
}

// digits with optional strict thousands grouping, e.g. 3,000 or 1,234,567
std::optional<std::int64_t> parse_grouped_digits(Cursor& c) {
    if (!is_digit(c.peek())) return std::nullopt;
    size_t start = c.pos;
    std::string digits;
    while (is_digit(c.peek())) digits.push_back(c.s[c.pos++]);
    if (digits.size() <= 3) {
        while (c.peek() == ',' && c.pos + 3 < c.s.size() && is_digit(c.s[c.pos + 1]) &&
               is_digit(c.s[c.pos + 2]) && is_digit(c.s[c.pos + 3]) &&
               (c.pos + 4 >= c.s.size() || !is_digit(c.s[c.pos + 4]))) {
            digits += c.s.substr(c.pos + 1, 3);
            c.pos += 4;
        }
    }
    std::int64_t v = 0;
    for (char d : digits) {
        if (mul_overflow(v, 10, &v) || __builtin_add_overflow(v, d - '0', &v)) {
            c.pos = start;
            return std::nullopt;
        }
    }
    return v;
}

std::optional<std::int64_t> parse_braced_int(Cursor& c) {
    size_t start = c.pos;
    c.skip_ws();
    if (!c.consume('{')) { c.pos = start; return std::nullopt; }
    c.skip_ws();
    auto v = parse_plain_int(c);
    if (!v) { c.pos = start; return std::nullopt; }
    c.skip_ws();
    if (!c.consume('}')) { c.pos = start; return std::nullopt; }
    return v;
}

std::optional<MathValue> pow_value(MathValue base, std::int64_t k) {
    if (k == 0) return MathValue::from_rational(1, 1);
    const bool invert = k < 0;
    std::uint64_t exp = invert ? static_cast<std::uint64_t>(-(k + 1)) + 1
                               : static_cast<std::uint64_t>(k);
    if (exp > 63) return MathValue::from_double(std::pow(base.as_double(), static_cast<double>(k)));
    if (base.exact) {
        std::int64_t num = 1, den = 1;
        bool overflow = false;
        for (std::uint64_t i = 0; i < exp; ++i) {
            if (mul_overflow(num, base.num, &num) || mul_overflow(den, base.den, &den)) {
                overflow = true;
                break;
            }
        }
        if (!overflow) {
            if (invert) {
                if (num == 0) return std::nullopt;
                std::swap(num, den);
            }
            return MathValue::from_rational(num, den);
        }
    }
    return MathValue::from_double(std::pow(base.as_double(), static_cast<double>(k)));
}

// one atom: \frac{a}{b} | \sqrt{n} | signed (grouped) number with optional
// decimal part and optional /denominator
std::optional<MathValue> parse_atom(Cursor& c) {
    c.skip_ws();
    if (c.consume(std::string("\\frac"))) {
        auto a = parse_braced_int(c);
        auto b = parse_braced_int(c);
        if (!a || !b || *b == 0) return std::nullopt;
        return MathValue::from_rational(*a, *b);
    }
    if (c.consume(std::string("\\sqrt"))) {
        auto n = parse_braced_int(c);
        if (!n || *n < 0) return std::nullopt;
        const auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(*n))));
        for (std::int64_t r : {root - 1, root, root + 1}) {
            if (r >= 0 && r * r == *n) return MathValue::from_rational(r, 1);
        }
        return std::nullopt;  // only perfect squares are recognized
    }

    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') neg = c.s[c.pos++] == '-';

    std::int64_t int_part = 0;
    bool have_int = false;
    if (is_digit(c.peek())) {
        auto v = parse_grouped_digits(c);
        if (!v) return std::nullopt;
        int_part = *v;
        have_int = true;
    }

    std::int64_t frac_digits_value = 0;
    std::int64_t frac_scale = 1;
    bool have_frac = false;
    if (c.peek() == '.' && c.pos + 1 < c.s.size() && is_digit(c.s[c.pos + 1])) {
        ++c.pos;
        while (is_digit(c.peek())) {
            // the overflow intrinsics clobber their outputs on overflow, so
            // probe into temporaries before committing
            std::int64_t next_scale, next_value;
            if (mul_overflow(frac_scale, 10, &next_scale) ||
                mul_overflow(frac_digits_value, 10, &next_value) ||
                __builtin_add_overflow(next_value, c.s[c.pos] - '0', &next_value)) {
                // too many digits for exact arithmetic: fall back to double
                double v = static_cast<double>(int_part) +
                           (static_cast<double>(frac_digits_value) / static_cast<double>(frac_scale));
                double scale = static_cast<double>(frac_scale);
                while (is_digit(c.peek())) {
                    scale *= 10.0;
                    v += (c.s[c.pos++] - '0') / scale;
                }
                return MathValue::from_double(neg ? -v : v);
            }
            frac_scale = next_scale;
            frac_digits_value = next_value;
            ++c.pos;
        }
        have_frac = true;
    }
    if (!have_int && !have_frac) return std::nullopt;

    std::int64_t num, den = 1;
    if (have_frac) {
        den = frac_scale;
        if (mul_overflow(int_part, frac_scale, &num) ||
            __builtin_add_overflow(num, frac_digits_value, &num)) {
            double v = static_cast<double>(int_part) +
                       static_cast<double>(frac_digits_value) / static_cast<double>(frac_scale);
            return MathValue::from_double(neg ? -v : v);
        }
    } else {
        num = int_part;
    }
    if (neg) num = -num;

    // plain a/b fraction
    if (!have_frac && c.peek() == '/' && c.pos + 1 < c.s.size() && is_digit(c.s[c.pos + 1])) {
        ++c.pos;
        auto d = parse_grouped_digits(c);
        if (!d || *d == 0) return std::nullopt;
        den = *d;
    }
    return MathValue::from_rational(num, den);
}

const char* kLeadingStrips[] = {"\\(", "\\[", "$", "\xE2\x82\xA9" /* ₩ */};
const char* kTrailingStrips[] = {"\\)", "\\]", "$",
                                 "\xEC\x9B\x90" /* 원 */, "\xEB\xAA\x85" /* 명 */,
                                 "km", "kg", "KM", "KG", "Km", "Kg"};

std::string strip_wrappers(const std::string& text) {
    std::string s = text;
    auto trim = [&s]() {
        size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        s = s.substr(b, e - b);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        trim();
        for (const char* tok : kLeadingStrips) {
            const size_t len = std::char_traits<char>::length(tok);
            if (s.size() >= len && s.compare(0, len, tok) == 0) {
                s.erase(0, len);
                changed = true;
            }
        }
        for (const char* tok : kTrailingStrips) {
            const size_t len = std::char_traits<char>::length(tok);
            if (s.size() >= len && s.compare(s.size() - len, len, tok) == 0) {
                s.erase(s.size() - len);
                changed = true;
            }
        }
    }
    return s;
}

}  // namespace

MathValue MathValue::from_rational(std::int64_t num, std::int64_t den) {
    MathValue v;
    if (den < 0) { num = -num; den = -den; }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    v.exact = true;
    v.num = num;
    v.den = den;
    v.approx = static_cast<double>(num) / static_cast<double>(den);
    return v;
}

MathValue MathValue::from_double(double value) {
    MathValue v;
    v.exact = false;
    v.approx = value;
    return v;
}

std::string MathValue::to_string() const {
    if (exact) {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), approx);
    return std::string(buf, end);
}

bool operator==(const MathValue& a, const MathValue& b) {
    if (a.exact && b.exact) return a.num == b.num && a.den == b.den;
    return a.approx == b.approx && a.exact == b.exact;
}

std::optional<MathValue> parse_math_value(const std::string& text) {
    const std::string body = strip_wrappers(text);
    if (body.empty()) return std::nullopt;

    Cursor c{body};
    auto value = parse_atom(c);
    if (!value) return std::nullopt;

    c.skip_ws();
    if (c.consume('^')) {
        std::optional<std::int64_t> k = parse_braced_int(c);
        if (!k) {
            c.skip_ws();
            k = parse_plain_int(c);
        }
        if (!k) return std::nullopt;
        value = pow_value(*value, *k);
        if (!value) return std::nullopt;
    }

    c.skip_ws();
    if (c.consume('%')) {
        if (value->exact) {
            std::int64_t den;
            if (!mul_overflow(value->den, 100, &den)) {
                *value = MathValue::from_rational(value->num, den);
            } else {
                *value = MathValue::from_double(value->as_double() / 100.0);
            }
        } else {
            *value = MathValue::from_double(value->as_double() / 100.0);
        }
    }

    c.skip_ws();
    if (!c.done()) return std::nullopt;  // trailing garbage: not a single value
    return value;
}

bool math_values_equal(const MathValue& a, const MathValue& b) {
    if (a.exact && b.exact && a.num == b.num && a.den == b.den) return true;
    const double x = a.as_double(), y = b.as_double();
    const double tol = std::max(1e-9, 1e-6 * std::max(std::abs(x), std::abs(y)));
    return std::abs(x - y) <= tol;
}

}  // namespace kheval
