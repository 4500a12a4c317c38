// Flat scenario configuration: `key = value` lines with `#` comments,
// numbers, bracketed vectors and bare strings. Merging follows the
// precedence flag > file > scenario default, and unknown keys are rejected
// against the scenario's default key set.
#pragma once

#include "nlpre/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlpre {

struct ConfigValue {
    enum class Kind { Number, Vector, Text };
    Kind kind = Kind::Number;
    double number = 0.0;
    Vec vector;
    std::string text;

    static ConfigValue from_number(double v);
    static ConfigValue from_vector(Vec v);
    static ConfigValue from_text(std::string v);
};

/// Parses "3.5", "[a, b, c]" or free text into a typed value.
ConfigValue parse_config_value(const std::string& raw);

struct Config {
    std::string scenario;
    std::map<std::string, ConfigValue> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    double number(const std::string& key) const;
    Vec vector(const std::string& key) const;
    std::string text(const std::string& key) const;

    void set(const std::string& key, ConfigValue value) { values[key] = std::move(value); }
};

/// Reads a config file. A `scenario = name` line selects the scenario; all
/// other lines become key-value overrides.
Config parse_config_file(const std::string& path);

/// Layers `overlay` on top of `base`, rejecting keys absent from the base
/// (the error message lists the valid keys).
Config merge_config(const Config& base, const Config& overlay);

}  // namespace nlpre
