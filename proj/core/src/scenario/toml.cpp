#include "mfc/scenario/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mfc::scenario {
namespace {

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        const char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_inline_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
};

TomlValue parse_value(Cursor& cur);

TomlValue parse_array(Cursor& cur) {
    cur.take();  // '['
    std::vector<TomlValue> items;
    cur.skip_inline_ws();
    if (!cur.done() && cur.peek() == ']') {
        cur.take();
        return TomlValue::array(std::move(items));
    }
    for (;;) {
        cur.skip_inline_ws();
        items.push_back(parse_value(cur));
        cur.skip_inline_ws();
        if (cur.done()) throw ConfigError("unterminated array", cur.line);
        const char c = cur.take();
        if (c == ']') break;
        if (c != ',') throw ConfigError("expected ',' or ']' in array", cur.line);
    }
    return TomlValue::array(std::move(items));
}

TomlValue parse_value(Cursor& cur) {
    if (cur.done()) throw ConfigError("expected a value", cur.line);
    const char c = cur.peek();
    if (c == '[') return parse_array(cur);
    if (c == '"') {
        cur.take();
        std::string s;
        while (!cur.done() && cur.peek() != '"') {
            char ch = cur.take();
            if (ch == '\\' && !cur.done()) {
                const char esc = cur.take();
                switch (esc) {
                    case 'n': ch = '\n'; break;
                    case 't': ch = '\t'; break;
                    case '"': ch = '"'; break;
                    case '\\': ch = '\\'; break;
                    default: throw ConfigError("unsupported escape in string", cur.line);
                }
            }
            if (ch == '\n') throw ConfigError("unterminated string", cur.line);
            s.push_back(ch);
        }
        if (cur.done()) throw ConfigError("unterminated string", cur.line);
        cur.take();  // closing quote
        return TomlValue::string(std::move(s));
    }
    // bare token: number or boolean
    std::string token;
    while (!cur.done() && cur.peek() != ',' && cur.peek() != ']' && cur.peek() != '#' &&
           cur.peek() != '\n' && cur.peek() != ' ' && cur.peek() != '\t')
        token.push_back(cur.take());
    if (token == "true") return TomlValue::boolean(true);
    if (token == "false") return TomlValue::boolean(false);
    try {
        std::size_t consumed = 0;
        const double v = std::stod(token, &consumed);
        if (consumed != token.size()) throw std::invalid_argument(token);
        return TomlValue::number(v);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse value '" + token + "'", cur.line);
    }
}

void dump_value(std::ostringstream& out, const TomlValue& v) {
    switch (v.kind()) {
        case TomlValue::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v.as_number());
            out << buf;
            break;
        }
        case TomlValue::Kind::Boolean:
            out << (v.as_boolean() ? "true" : "false");
            break;
        case TomlValue::Kind::String:
            out << '"';
            for (char c : v.as_string()) {
                if (c == '"' || c == '\\') out << '\\';
                out << c;
            }
            out << '"';
            break;
        case TomlValue::Kind::Array: {
            out << '[';
            bool first = true;
            for (const auto& item : v.as_array()) {
                if (!first) out << ", ";
                first = false;
                dump_value(out, item);
            }
            out << ']';
            break;
        }
    }
}

}  // namespace

TomlValue TomlValue::number(double v) {
    TomlValue out;
    out.kind_ = Kind::Number;
    out.num_ = v;
    return out;
}

TomlValue TomlValue::boolean(bool v) {
    TomlValue out;
    out.kind_ = Kind::Boolean;
    out.bool_ = v;
    return out;
}

TomlValue TomlValue::string(std::string v) {
    TomlValue out;
    out.kind_ = Kind::String;
    out.str_ = std::move(v);
    return out;
}

TomlValue TomlValue::array(std::vector<TomlValue> v) {
    TomlValue out;
    out.kind_ = Kind::Array;
    out.arr_ = std::move(v);
    return out;
}

double TomlValue::as_number() const {
    if (kind_ != Kind::Number) throw ConfigError("expected a number");
    return num_;
}

bool TomlValue::as_boolean() const {
    if (kind_ != Kind::Boolean) throw ConfigError("expected a boolean");
    return bool_;
}

const std::string& TomlValue::as_string() const {
    if (kind_ != Kind::String) throw ConfigError("expected a string");
    return str_;
}

const std::vector<TomlValue>& TomlValue::as_array() const {
    if (kind_ != Kind::Array) throw ConfigError("expected an array");
    return arr_;
}

std::vector<double> TomlValue::as_number_array() const {
    std::vector<double> out;
    for (const auto& v : as_array()) out.push_back(v.as_number());
    return out;
}

bool TomlValue::operator==(const TomlValue& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Number: return num_ == other.num_;
        case Kind::Boolean: return bool_ == other.bool_;
        case Kind::String: return str_ == other.str_;
        case Kind::Array: return arr_ == other.arr_;
    }
    return false;
}

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable table;
    Cursor cur{text};
    std::string section;

    while (!cur.done()) {
        cur.skip_inline_ws();
        if (cur.done()) break;
        const char c = cur.peek();
        if (c == '\n') {
            cur.take();
            continue;
        }
        if (c == '#') {
            while (!cur.done() && cur.peek() != '\n') cur.take();
            continue;
        }
        if (c == '[') {
            cur.take();
            std::string name;
            while (!cur.done() && cur.peek() != ']') {
                const char sc = cur.take();
                if (sc == '\n') throw ConfigError("unterminated section header", cur.line);
                name.push_back(sc);
            }
            if (cur.done()) throw ConfigError("unterminated section header", cur.line);
            cur.take();  // ']'
            if (name.empty()) throw ConfigError("empty section name", cur.line);
            for (char nc : name)
                if (!is_bare_key_char(nc) && nc != '.')
                    throw ConfigError("invalid section name '" + name + "'", cur.line);
            section = name;
            continue;
        }
        // key = value
        std::string key;
        while (!cur.done() && is_bare_key_char(cur.peek())) key.push_back(cur.take());
        if (key.empty()) throw ConfigError("expected a key", cur.line);
        cur.skip_inline_ws();
        if (cur.done() || cur.take() != '=') throw ConfigError("expected '=' after key", cur.line);
        cur.skip_inline_ws();
        const int value_line = cur.line;
        TomlValue value = parse_value(cur);
        cur.skip_inline_ws();
        if (!cur.done() && cur.peek() == '#')
            while (!cur.done() && cur.peek() != '\n') cur.take();
        if (!cur.done() && cur.peek() != '\n')
            throw ConfigError("trailing characters after value", cur.line);

        const std::string path = section.empty() ? key : section + "." + key;
        if (table.values_.count(path)) throw ConfigError("duplicate key '" + path + "'", value_line);
        table.values_.emplace(path, std::move(value));
        table.lines_.emplace(path, value_line);
    }
    return table;
}

void TomlTable::set(const std::string& path, TomlValue value) {
    values_.insert_or_assign(path, std::move(value));
}

bool TomlTable::contains(const std::string& path) const { return values_.count(path) > 0; }

const TomlValue* TomlTable::find(const std::string& path) const {
    const auto it = values_.find(path);
    return it == values_.end() ? nullptr : &it->second;
}

int TomlTable::line_of(const std::string& path) const {
    const auto it = lines_.find(path);
    return it == lines_.end() ? 0 : it->second;
}

double TomlTable::number(const std::string& path) const {
    const TomlValue* v = find(path);
    if (v == nullptr) throw ConfigError("missing required field '" + path + "'");
    if (v->kind() != TomlValue::Kind::Number)
        throw ConfigError("field '" + path + "' must be a number", line_of(path));
    return v->as_number();
}

double TomlTable::number_or(const std::string& path, double fallback) const {
    return contains(path) ? number(path) : fallback;
}

bool TomlTable::boolean_or(const std::string& path, bool fallback) const {
    const TomlValue* v = find(path);
    if (v == nullptr) return fallback;
    if (v->kind() != TomlValue::Kind::Boolean)
        throw ConfigError("field '" + path + "' must be a boolean", line_of(path));
    return v->as_boolean();
}

std::string TomlTable::string(const std::string& path) const {
    const TomlValue* v = find(path);
    if (v == nullptr) throw ConfigError("missing required field '" + path + "'");
    if (v->kind() != TomlValue::Kind::String)
        throw ConfigError("field '" + path + "' must be a string", line_of(path));
    return v->as_string();
}

std::string TomlTable::string_or(const std::string& path, std::string fallback) const {
    return contains(path) ? string(path) : std::move(fallback);
}

std::vector<double> TomlTable::number_array(const std::string& path) const {
    const TomlValue* v = find(path);
    if (v == nullptr) throw ConfigError("missing required field '" + path + "'");
    if (v->kind() != TomlValue::Kind::Array)
        throw ConfigError("field '" + path + "' must be an array", line_of(path));
    try {
        return v->as_number_array();
    } catch (const ConfigError&) {
        throw ConfigError("field '" + path + "' must be an array of numbers", line_of(path));
    }
}

std::vector<std::string> TomlTable::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
}

std::string TomlTable::dump() const {
    // Group by section (everything before the last dot).
    std::map<std::string, std::vector<std::pair<std::string, const TomlValue*>>> sections;
    for (const auto& [path, value] : values_) {
        const auto dot = path.rfind('.');
        const std::string section = dot == std::string::npos ? "" : path.substr(0, dot);
        const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
        sections[section].emplace_back(key, &value);
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [section, keys] : sections) {
        if (!first) out << "\n";
        first = false;
        if (!section.empty()) out << "[" << section << "]\n";
        for (const auto& [key, value] : keys) {
            out << key << " = ";
            dump_value(out, *value);
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace mfc::scenario
