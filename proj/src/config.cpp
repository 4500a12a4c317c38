#include "nlpre/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nlpre {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

}  // namespace

ConfigValue ConfigValue::from_number(double v) {
    ConfigValue c;
    c.kind = Kind::Number;
    c.number = v;
    return c;
}

ConfigValue ConfigValue::from_vector(Vec v) {
    ConfigValue c;
    c.kind = Kind::Vector;
    c.vector = std::move(v);
    return c;
}

ConfigValue ConfigValue::from_text(std::string v) {
    ConfigValue c;
    c.kind = Kind::Text;
    c.text = std::move(v);
    return c;
}

ConfigValue parse_config_value(const std::string& raw) {
    const std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError("unterminated vector value: " + s);
        std::vector<double> entries;
        std::string body = s.substr(1, s.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double v;
            if (!parse_number(item, v)) throw ConfigError("bad vector entry '" + item + "' in " + s);
            entries.push_back(v);
        }
        Vec v(static_cast<Index>(entries.size()));
        for (size_t i = 0; i < entries.size(); ++i) v[static_cast<Index>(i)] = entries[i];
        return ConfigValue::from_vector(std::move(v));
    }
    double v;
    if (parse_number(s, v)) return ConfigValue::from_number(v);
    return ConfigValue::from_text(s);
}

double Config::number(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + key + "'");
    if (it->second.kind != ConfigValue::Kind::Number) {
        throw ConfigError("config key '" + key + "' is not a number");
    }
    return it->second.number;
}

Vec Config::vector(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + key + "'");
    if (it->second.kind != ConfigValue::Kind::Vector) {
        throw ConfigError("config key '" + key + "' is not a vector");
    }
    return it->second.vector;
}

std::string Config::text(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + key + "'");
    if (it->second.kind != ConfigValue::Kind::Text) {
        throw ConfigError("config key '" + key + "' is not a string");
    }
    return it->second.text;
}

Config parse_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file " + path);
    Config cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        }
        if (key == "scenario") {
            cfg.scenario = raw;
        } else {
            cfg.set(key, parse_config_value(raw));
        }
    }
    return cfg;
}

Config merge_config(const Config& base, const Config& overlay) {
    Config merged = base;
    if (!overlay.scenario.empty()) merged.scenario = overlay.scenario;
    for (const auto& [key, value] : overlay.values) {
        if (!base.has(key)) {
            std::string valid;
            for (const auto& [k, v] : base.values) {
                if (!valid.empty()) valid += ", ";
                valid += k;
            }
            throw ConfigError("unknown config key '" + key + "' for scenario '" + base.scenario +
                              "'; valid keys: " + valid);
        }
        merged.values[key] = value;
    }
    return merged;
}

}  // namespace nlpre
