#include "kheval/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kheval/error.hpp"

namespace kheval {

using nlohmann::json;

const char* to_string(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Validation: return "validation";
        case Split::Test: return "test";
    }
    return "test";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "validation") return Split::Validation;
    if (s == "test") return Split::Test;
    throw Error(ErrorKind::ConfigError,
                "split must be one of train/validation/test, got '" + s + "'");
}

std::optional<int> resolve_reference_index(const std::string& reference,
                                           const std::vector<std::string>& options) {
    if (reference.size() == 1 && reference[0] >= 'A' && reference[0] <= 'Z') {
        const int idx = reference[0] - 'A';
        if (idx < static_cast<int>(options.size())) return idx;
        return std::nullopt;
    }
    for (size_t i = 0; i < options.size(); ++i) {
        if (options[i] == reference) return static_cast<int>(i);
    }
    return std::nullopt;
}

namespace {

[[noreturn]] void schema_error(size_t line_no, const std::string& reason) {
    throw Error(ErrorKind::SchemaError,
                "line " + std::to_string(line_no) + ": " + reason);
}

std::string stringify(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

Sample parse_line(const std::string& line, size_t line_no) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) schema_error(line_no, "not valid JSON");
    if (!obj.is_object()) schema_error(line_no, "line is not a JSON object");

    Sample s;
    for (const char* field : {"id", "input", "reference"}) {
        if (!obj.contains(field)) schema_error(line_no, std::string("missing field ") + field);
        if (!obj[field].is_string()) schema_error(line_no, std::string("field ") + field + " must be a string");
    }
    s.id = obj["id"].get<std::string>();
    s.input = obj["input"].get<std::string>();
    s.reference = obj["reference"].get<std::string>();
    if (s.id.empty()) schema_error(line_no, "field id must be nonempty");

    if (obj.contains("options")) {
        const json& opts = obj["options"];
        if (!opts.is_array()) schema_error(line_no, "field options must be an array");
        for (const json& o : opts) {
            if (!o.is_string()) schema_error(line_no, "options entries must be strings");
            s.options.push_back(o.get<std::string>());
        }
        if (s.options.size() < 2) schema_error(line_no, "options must have at least 2 entries");
        s.reference_index = resolve_reference_index(s.reference, s.options);
        if (!s.reference_index) {
            schema_error(line_no, "reference '" + s.reference +
                                      "' matches no option and is not a valid option letter");
        }
    }
    if (obj.contains("subset")) {
        if (!obj["subset"].is_string()) schema_error(line_no, "field subset must be a string");
        s.subset = obj["subset"].get<std::string>();
    }
    if (obj.contains("keywords")) {
        const json& kws = obj["keywords"];
        if (!kws.is_array()) schema_error(line_no, "field keywords must be an array");
        for (const json& k : kws) {
            if (!k.is_string()) schema_error(line_no, "keywords entries must be strings");
            s.keywords.push_back(k.get<std::string>());
        }
    }
    if (obj.contains("metadata")) {
        if (!obj["metadata"].is_object()) schema_error(line_no, "field metadata must be an object");
        for (auto& [k, v] : obj["metadata"].items()) s.metadata[k] = stringify(v);
    }
    // Anything else is preserved rather than dropped.
    static const std::set<std::string> known = {"id",      "input",    "reference", "options",
                                                "subset",  "keywords", "metadata"};
    for (auto& [k, v] : obj.items()) {
        if (known.count(k) == 0) s.metadata[k] = stringify(v);
    }
    return s;
}

}  // namespace

std::vector<Sample> parse_jsonl(const std::string& content, Split /*split*/) {
    std::vector<Sample> samples;
    std::istringstream in(content);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) schema_error(line_no, "empty line");
        samples.push_back(parse_line(line, line_no));
    }
    return samples;
}

std::vector<Sample> load_jsonl(const std::string& path, Split split) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open dataset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_jsonl(buf.str(), split);
}

std::string to_jsonl(const std::vector<Sample>& samples) {
    std::string out;
    for (const Sample& s : samples) {
        json obj;
        obj["id"] = s.id;
        obj["input"] = s.input;
        obj["reference"] = s.reference;
        if (!s.options.empty()) obj["options"] = s.options;
        if (s.subset) obj["subset"] = *s.subset;
        if (!s.keywords.empty()) obj["keywords"] = s.keywords;
        if (!s.metadata.empty()) obj["metadata"] = s.metadata;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<Sample> filter_subset(const std::vector<Sample>& samples, const std::string& subset) {
    std::vector<Sample> out;
    for (const Sample& s : samples) {
        if (s.subset && *s.subset == subset) out.push_back(s);
    }
    return out;
}

void validate_dataset(const std::vector<Sample>& samples) {
    std::set<std::string> seen;
    std::vector<std::string> bad;
    for (const Sample& s : samples) {
        if (s.id.empty()) {
            bad.push_back("(empty id)");
            continue;
        }
        if (!seen.insert(s.id).second) bad.push_back(s.id + " (duplicate id)");
        if (s.is_mcq()) {
            if (s.options.size() < 2) bad.push_back(s.id + " (fewer than 2 options)");
            if (!resolve_reference_index(s.reference, s.options))
                bad.push_back(s.id + " (reference resolves to no option)");
        }
    }
    if (!bad.empty()) {
        std::string msg = "invalid samples: ";
        for (size_t i = 0; i < bad.size(); ++i) {
            if (i) msg += ", ";
            msg += bad[i];
        }
        throw Error(ErrorKind::ValidationError, msg);
    }
}

bool operator==(const Sample& a, const Sample& b) {
    return a.id == b.id && a.input == b.input && a.reference == b.reference &&
           a.options == b.options && a.reference_index == b.reference_index &&
           a.subset == b.subset && a.keywords == b.keywords && a.metadata == b.metadata;
}

}  // namespace kheval
