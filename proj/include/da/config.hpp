#pragma once

#include <map>
#include <string>
#include <vector>

#include "da/types.hpp"

namespace da {

/// Flat key-value config file: `key = value` lines, `#` comments, and
/// `[section]` headers. Keys before the first section land in the section
/// with an empty name. Section order is preserved.
struct ConfigSection {
    std::string name;
    std::map<std::string, std::string> values;
    int line = 0;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
};

struct ConfigFile {
    std::vector<ConfigSection> sections;

    ConfigSection& global();
    const ConfigSection* find(const std::string& name) const;
};

ConfigFile parse_config_file(const std::string& path);
ConfigFile parse_config_text(const std::string& text, const std::string& origin);

double to_double(const std::string& value, const std::string& key);
int to_int(const std::string& value, const std::string& key);
bool to_bool(const std::string& value, const std::string& key);
std::vector<double> to_double_list(const std::string& value, const std::string& key);
std::vector<std::string> split_list(const std::string& value);

}  // namespace da
