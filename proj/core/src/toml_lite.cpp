#include "toml_lite.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tfelab/config.hpp"

namespace tfelab::toml_lite {

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment that starts outside quotes.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '-')
            return false;
    return true;
}

bool parse_number(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) return false;
    return std::isfinite(out);
}

Value parse_scalar(const std::string& origin, int line, const std::string& tok) {
    Value v;
    v.line = line;
    if (tok == "true" || tok == "false") {
        v.kind = Value::Kind::boolean;
        v.b = tok == "true";
        return v;
    }
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
        const std::string body = tok.substr(1, tok.size() - 2);
        if (body.find('"') != std::string::npos)
            fail(origin, line, "embedded quotes are not supported");
        v.kind = Value::Kind::string;
        v.str = body;
        return v;
    }
    double num = 0.0;
    if (!parse_number(tok, num))
        fail(origin, line, "cannot parse value '" + tok + "'");
    v.kind = Value::Kind::number;
    v.num = num;
    return v;
}

Value parse_value(const std::string& origin, int line, const std::string& raw) {
    const std::string tok = trim(raw);
    if (tok.empty()) fail(origin, line, "missing value");
    if (tok.front() != '[') return parse_scalar(origin, line, tok);
    if (tok.back() != ']') fail(origin, line, "unterminated array");
    Value v;
    v.line = line;
    std::string body = tok.substr(1, tok.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
        if (c == '"') in_str = !in_str;
        if (c == ',' && !in_str) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    if (items.empty()) {
        v.kind = Value::Kind::number_array;
        return v;
    }
    const bool strings = items.front().size() && items.front().front() == '"';
    v.kind = strings ? Value::Kind::string_array : Value::Kind::number_array;
    for (const auto& it : items) {
        Value s = parse_scalar(origin, line, it);
        if (strings) {
            if (s.kind != Value::Kind::string)
                fail(origin, line, "mixed array element types");
            v.strs.push_back(s.str);
        } else {
            if (s.kind != Value::Kind::number)
                fail(origin, line, "mixed array element types");
            v.nums.push_back(s.num);
        }
    }
    return v;
}

}  // namespace

bool Document::has(const std::string& key) const {
    return entries.count(key) > 0;
}

const Value* Document::find(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

const std::pair<const std::string, Value>* Document::first_unused() const {
    for (const auto& kv : entries)
        if (!kv.second.used) return &kv;
    return nullptr;
}

Document parse(const std::string& text, const std::string& origin) {
    Document doc;
    doc.origin = origin;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                fail(origin, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_key(section))
                fail(origin, line, "invalid section name '" + section + "'");
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail(origin, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) fail(origin, line, "invalid key '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        if (doc.entries.count(full))
            fail(origin, line, "duplicate key '" + full + "'");
        doc.entries.emplace(full, parse_value(origin, line, s.substr(eq + 1)));
    }
    return doc;
}

Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

}  // namespace tfelab::toml_lite
