#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfc::scenario {

// Parse or validation failure with a line/field diagnostic.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_number(line) {}
    int line_number;
};

// Value of the key-value tree grammar: number, boolean, string or array.
class TomlValue {
public:
    enum class Kind { Number, Boolean, String, Array };

    static TomlValue number(double v);
    static TomlValue boolean(bool v);
    static TomlValue string(std::string v);
    static TomlValue array(std::vector<TomlValue> v);

    Kind kind() const { return kind_; }
    double as_number() const;
    bool as_boolean() const;
    const std::string& as_string() const;
    const std::vector<TomlValue>& as_array() const;

    std::vector<double> as_number_array() const;

    bool operator==(const TomlValue& other) const;

private:
    Kind kind_ = Kind::Number;
    double num_ = 0.0;
    bool bool_ = false;
    std::string str_;
    std::vector<TomlValue> arr_;
};

// Flat table of dotted-path keys parsed from a TOML-compatible document
// ([section] headers, key = value, # comments, single-line arrays).
class TomlTable {
public:
    static TomlTable parse(const std::string& text);

    void set(const std::string& path, TomlValue value);
    bool contains(const std::string& path) const;
    const TomlValue* find(const std::string& path) const;
    int line_of(const std::string& path) const;

    // Typed getters; the required variants throw ConfigError naming the key.
    double number(const std::string& path) const;
    double number_or(const std::string& path, double fallback) const;
    bool boolean_or(const std::string& path, bool fallback) const;
    std::string string(const std::string& path) const;
    std::string string_or(const std::string& path, std::string fallback) const;
    std::vector<double> number_array(const std::string& path) const;

    const std::map<std::string, TomlValue>& entries() const { return values_; }

    // Every key under "prefix." (used to reject unknown fields).
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    std::string dump() const;

private:
    std::map<std::string, TomlValue> values_;
    std::map<std::string, int> lines_;
};

}  // namespace mfc::scenario
