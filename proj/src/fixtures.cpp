#include "kheval/fixtures.hpp"

#include <array>
#include <cstdio>

#include "kheval/error.hpp"
#include "kheval/evaluators.hpp"
#include "kheval/hash.hpp"

namespace kheval {

namespace {

std::string format_id(const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03d", prefix, i);
    return buf;
}

// -- fixture_mcq --------------------------------------------------------------

std::vector<Sample> build_fixture_mcq() {
    static const std::array<const char*, 3> subsets = {"reasoning", "culture", "comprehension"};
    std::vector<Sample> samples;
    samples.reserve(40);
    for (int i = 0; i < 40; ++i) {
        const int a = 2 + i;
        const int b = 3 + (i * 7) % 11;
        const int correct = a + b;
        const int pos = i % 4;  // balanced answer letters: 10 each of A..D

        std::array<int, 4> values{};
        const std::array<int, 4> distractors = {correct - 2, correct - 1, correct + 1,
                                                correct + 2};
        int d = 0;
        for (int slot = 0; slot < 4; ++slot) {
            values[static_cast<size_t>(slot)] = (slot == pos) ? correct : distractors[d++];
        }

        Sample s;
        s.id = format_id("mcq", i);
        s.input = "문제 " + std::to_string(i + 1) + ": " + std::to_string(a) + " + " +
                  std::to_string(b) + "의 값은?";
        for (int slot = 0; slot < 4; ++slot) {
            s.options.push_back(std::string(1, static_cast<char>('A' + slot)) + ") " +
                                std::to_string(values[static_cast<size_t>(slot)]));
        }
        // Exercise both reference forms: bare letter and full option text.
        s.reference = (i % 2 == 0) ? std::string(1, static_cast<char>('A' + pos))
                                   : s.options[static_cast<size_t>(pos)];
        s.reference_index = pos;
        s.subset = subsets[static_cast<size_t>(i % 3)];
        samples.push_back(std::move(s));
    }
    return samples;
}

// -- fixture_math -------------------------------------------------------------

struct MathItem {
    int num;
    int den;
};

// Reduced fractions whose decimal expansions terminate, so the decimal form
// is exactly equal as a rational.
constexpr std::array<MathItem, 20> kMathItems = {{
    {1, 2},   {3, 4},   {1, 8},   {5, 8},    {7, 16},  {3, 16},  {9, 32},
    {1, 4},   {3, 8},   {11, 16}, {1, 5},    {3, 20},  {7, 25},  {9, 40},
    {13, 50}, {17, 80}, {21, 100}, {3, 125}, {33, 200}, {7, 250},
}};

std::string terminating_decimal(int num, int den) {
    // den divides some power of ten by construction
    long long scale = 1;
    int digits = 0;
    while (scale % den != 0) {
        scale *= 10;
        ++digits;
    }
    const long long value = static_cast<long long>(num) * (scale / den);
    std::string frac = std::to_string(value);
    if (static_cast<int>(frac.size()) < digits) {
        frac.insert(0, static_cast<size_t>(digits) - frac.size(), '0');
    }
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    return "0." + frac;
}

std::vector<Sample> build_fixture_math() {
    std::vector<Sample> samples;
    samples.reserve(kMathItems.size());
    for (size_t i = 0; i < kMathItems.size(); ++i) {
        const auto [num, den] = kMathItems[i];
        Sample s;
        s.id = format_id("math", static_cast<int>(i));
        s.input = "문제 " + std::to_string(i + 1) + ": " + std::to_string(num * 3) + "/" +
                  std::to_string(den * 3) + "를 기약분수로 나타내시오.";
        s.reference = std::to_string(num) + "/" + std::to_string(den);
        s.subset = (i % 2 == 0) ? "arithmetic" : "algebra";
        samples.push_back(std::move(s));
    }
    return samples;
}

// -- fixture_gen --------------------------------------------------------------

struct GenItem {
    const char* input;
    const char* reference;
    std::vector<const char*> keywords;
    const char* subset;
    const char* output;  // scripted mock answer
};

const std::vector<GenItem>& gen_items() {
    static const std::vector<GenItem> items = {
        {"세종대왕이 창제한 문자의 이름은 무엇입니까?", "훈민정음",
         {"세종대왕", "훈민정음"}, "history",
         "세종대왕이 만든 글자입니다. 정답: 훈민정음"},
        {"대한민국의 수도는 어디입니까?", "서울", {"서울"}, "geography",
         "정답: 서울"},
        {"물이 끓는 섭씨 온도는 몇 도입니까?", "100도", {"100도"}, "science",
         "표준 기압에서 끓습니다. 정답: 100도"},
        {"김치의 주재료인 채소는 무엇입니까?", "배추", {"배추", "김치"}, "culture",
         "김치는 소금에 절여 만듭니다. 정답: 배추"},
        {"지구에서 가장 가까운 별은 무엇입니까?", "태양", {"태양"}, "science",
         "정답: 태양"},
        {"한글날은 몇 월 며칠입니까?", "10월 9일", {"한글날", "10월 9일"}, "history",
         "정답: 10월 9일"},
        {"한국에서 가장 긴 강은 무엇입니까?", "낙동강", {"낙동강"}, "geography",
         "정답: 낙동강"},
        {"불고기의 주된 조리 방식은 무엇입니까?", "굽기", {"불고기", "굽기"}, "culture",
         "고기를 불에 직접 익힙니다. 정답: 굽기"},
        {"빛의 삼원색에 포함되지 않는 색은 무엇입니까?", "노랑", {"노랑"}, "science",
         "빨강과 초록은 포함됩니다. 정답: 노랑"},
        {"임진왜란에서 거북선을 이끈 장군은 누구입니까?", "이순신",
         {"이순신", "거북선"}, "history",
         "학익진으로 유명한 장군입니다. 정답: 이순신"},
        {"제주도에서 가장 높은 산은 무엇입니까?", "한라산", {"한라산", "제주도"}, "geography",
         "화산섬의 중심에 있습니다. 정답: 한라산"},
        {"추석에 먹는 대표적인 떡은 무엇입니까?", "송편", {"송편", "추석"}, "culture",
         "가을 명절에 먹습니다. 정답: 송편"},
        {"식물이 빛으로 양분을 만드는 작용을 무엇이라고 합니까?", "광합성",
         {"광합성"}, "science",
         "이산화탄소와 물을 씁니다. 정답: 광합성"},
        {"고려를 건국한 왕은 누구입니까?", "왕건", {"왕건", "고려"}, "history",
         "정답: 왕건"},
        {"한반도 동쪽 바다의 이름은 무엇입니까?", "동해", {"동해"}, "geography",
         "정답: 동해"},
        {"설날 아침에 먹는 대표 음식은 무엇입니까?", "떡국", {"떡국", "설날"}, "culture",
         "설날에는 만두를 먹습니다. 정답: 만두"},
        {"물의 화학식은 무엇입니까?", "H2O", {"H2O"}, "science",
         "물의 화학식은 산소와 수소로 이루어집니다. 정답: 산소"},
        {"판소리에서 북을 치는 사람을 무엇이라고 합니까?", "고수",
         {"판소리", "고수"}, "culture",
         "정답: 소리꾼"},
        {"조선의 첫 번째 왕은 누구입니까?", "이성계", {"이성계", "조선"}, "history",
         "조선을 세운 사람입니다. 정답: 세종대왕"},
        {"한국에서 가장 큰 섬은 어디입니까?", "제주도", {"제주도"}, "geography",
         "정답: 울릉도"},
    };
    return items;
}

std::vector<Sample> build_fixture_gen() {
    const auto& items = gen_items();
    std::vector<Sample> samples;
    samples.reserve(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        const GenItem& item = items[i];
        Sample s;
        s.id = format_id("gen", static_cast<int>(i));
        s.input = item.input;
        s.reference = item.reference;
        for (const char* kw : item.keywords) s.keywords.emplace_back(kw);
        s.subset = item.subset;
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace

std::vector<Sample> fixture_dataset(const std::string& name) {
    if (name == "fixture_mcq") return build_fixture_mcq();
    if (name == "fixture_math") return build_fixture_math();
    if (name == "fixture_gen") return build_fixture_gen();
    throw Error(ErrorKind::UnknownComponent, "no bundled fixture named '" + name + "'");
}

std::map<std::string, std::string> fixture_script_outputs(const std::string& script) {
    std::map<std::string, std::string> outputs;
    if (script == "fixture_mcq") {
        const auto samples = build_fixture_mcq();
        for (size_t i = 0; i < samples.size(); ++i) {
            const Sample& s = samples[i];
            // correct letter on three of every four items, the next letter
            // otherwise: accuracy is exactly 0.75 and fully deterministic
            int answer = *s.reference_index;
            if (i % 4 == 3) answer = (answer + 1) % static_cast<int>(s.options.size());
            outputs[s.input] =
                std::string("풀이 생략. 정답: ") + static_cast<char>('A' + answer);
        }
        return outputs;
    }
    if (script == "fixture_math_decimal" || script == "fixture_math_half_english") {
        const bool half_english = script == "fixture_math_half_english";
        const auto samples = build_fixture_math();
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto [num, den] = kMathItems[i];
            const std::string decimal = terminating_decimal(num, den);
            if (half_english && i % 2 == 1) {
                outputs[samples[i].input] = "The fraction reduces nicely. Answer: " + decimal;
            } else {
                outputs[samples[i].input] = "소수로 나타내면 다음과 같습니다. 정답: " + decimal;
            }
        }
        return outputs;
    }
    if (script == "fixture_gen") {
        const auto& items = gen_items();
        const auto samples = build_fixture_gen();
        for (size_t i = 0; i < samples.size(); ++i) {
            outputs[samples[i].input] = items[i].output;
        }
        return outputs;
    }
    throw Error(ErrorKind::UnknownComponent, "no bundled mock script named '" + script + "'");
}

std::map<std::pair<std::string, std::string>, double> fixture_mcq_scoring_table() {
    std::map<std::pair<std::string, std::string>, double> table;
    for (const Sample& s : build_fixture_mcq()) {
        const std::string context = loglikelihood_prompt(s);
        for (size_t j = 0; j < s.options.size(); ++j) {
            const std::uint64_t h = splitmix64(fnv1a64(s.id) * 0x9E3779B97F4A7C15ULL + j);
            const double logprob = -(0.1 + static_cast<double>(h % 8000) / 1000.0);
            table[{context, s.options[j]}] = logprob;
        }
    }
    return table;
}

std::shared_ptr<MockBackend> make_scripted_mock(const std::string& script, std::uint64_t seed) {
    auto mock = std::make_shared<MockBackend>(seed);
    if (script.empty() || script == "default") return mock;
    if (script == "fixture_mcq") {
        for (const auto& [key, logprob] : fixture_mcq_scoring_table()) {
            mock->set_score(key.first, key.second, {{key.second, logprob}});
        }
        for (const auto& [input, output] : fixture_script_outputs(script)) {
            mock->set_answer(input, output);
        }
        return mock;
    }
    for (const auto& [input, output] : fixture_script_outputs(script)) {
        mock->set_answer(input, output);
    }
    return mock;
}

}  // namespace kheval
