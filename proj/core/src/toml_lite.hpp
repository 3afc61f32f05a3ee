// Minimal TOML subset used by the run configuration: [tables], bare keys,
// numbers, booleans, quoted strings and flat homogeneous arrays, with
// line-accurate errors. Internal to the config layer.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace tfelab::toml_lite {

struct Value {
    enum class Kind { number, boolean, string, number_array, string_array };
    Kind kind = Kind::number;
    double num = 0.0;
    bool b = false;
    std::string str;
    std::vector<double> nums;
    std::vector<std::string> strs;
    int line = 0;
    mutable bool used = false;
};

struct Document {
    // Keys are "section.key"; top-level keys have no prefix.
    std::map<std::string, Value> entries;
    std::string origin;

    bool has(const std::string& key) const;
    const Value* find(const std::string& key) const;  // marks used
    // First entry never consumed by the schema, or nullptr.
    const std::pair<const std::string, Value>* first_unused() const;
};

// Throws tfelab::ConfigError on malformed input.
Document parse(const std::string& text, const std::string& origin);
Document parse_file(const std::string& path);

}  // namespace tfelab::toml_lite
