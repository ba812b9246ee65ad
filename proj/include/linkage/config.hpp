#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace linkage {

/// Key/value tree parsed from the scenario format: `key = value` entries and
/// `name { ... }` blocks. Values are plain integers, decimals or bare words;
/// no expressions. `#` starts a comment.
class ConfigNode {
  public:
    std::map<std::string, std::string> values;
    std::map<std::string, ConfigNode> blocks;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    bool has_block(const std::string& key) const { return blocks.count(key) > 0; }

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer_or(const std::string& key, int fallback) const;
    std::string word(const std::string& key) const;
    std::string word_or(const std::string& key, const std::string& fallback) const;

    const ConfigNode& block(const std::string& key) const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ConfigNode parse_config(const std::string& text);
ConfigNode parse_config_file(const std::string& path);

}  // namespace linkage
