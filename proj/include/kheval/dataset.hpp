#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kheval {

enum class Split { Train, Validation, Test };

const char* to_string(Split split);
Split split_from_string(const std::string& s);  // throws ConfigError

/// One benchmark item in the uniform schema. `options` empty means the item
/// is not multiple-choice. When options are present, `reference_index` holds
/// the resolved gold index: letter-form references ("A") are normalized to
/// their option index at load time so downstream code sees one canonical form.
struct Sample {
    std::string id;
    std::string input;
    std::string reference;
    std::vector<std::string> options;
    std::optional<int> reference_index;
    std::optional<std::string> subset;
    std::vector<std::string> keywords;
    std::map<std::string, std::string> metadata;

    bool is_mcq() const { return !options.empty(); }
};

struct DatasetSpec {
    std::string name;
    Split split = Split::Test;
    std::string source;  // file path for generic_jsonl, fixture id for bundled fixtures
};

/// Loads a UTF-8 JSONL file, one object per line, in file order. Unknown keys
/// go into Sample::metadata (values stringified). A malformed line aborts the
/// whole load with SchemaError carrying the 1-based line number; silently
/// skipping lines would change denominators between runs.
std::vector<Sample> load_jsonl(const std::string& path, Split split = Split::Test);

/// Parses already-read JSONL content; `load_jsonl` is this plus file IO.
std::vector<Sample> parse_jsonl(const std::string& content, Split split = Split::Test);

/// Serializes samples back to the JSONL wire form (UTF-8, LF, one object per
/// line, trailing newline). Reloading the result yields an equal list.
std::string to_jsonl(const std::vector<Sample>& samples);

/// Order-preserving filter on Sample::subset == subset. A sample with no
/// subset label never matches, including for subset == "".
std::vector<Sample> filter_subset(const std::vector<Sample>& samples, const std::string& subset);

/// Checks all Sample invariants: nonempty unique ids, MCQ option counts,
/// resolvable references. Throws ValidationError naming the offending ids.
void validate_dataset(const std::vector<Sample>& samples);

/// Resolves an MCQ reference to its option index: either a bare uppercase
/// letter A..Z with index < option count, or exact equality with one option.
/// Returns nullopt if the reference resolves to nothing.
std::optional<int> resolve_reference_index(const std::string& reference,
                                           const std::vector<std::string>& options);

bool operator==(const Sample& a, const Sample& b);

}  // namespace kheval
