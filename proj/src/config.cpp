#include "da/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace da {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

const std::string& ConfigSection::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) {
        const std::string where = name.empty() ? "top level" : "section [" + name + "]";
        throw ValidationError("config: missing key '" + key + "' in " + where);
    }
    return it->second;
}

std::string ConfigSection::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

ConfigSection& ConfigFile::global() {
    if (sections.empty() || !sections.front().name.empty()) {
        sections.insert(sections.begin(), ConfigSection{});
    }
    return sections.front();
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

ConfigFile parse_config_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.sections.push_back(ConfigSection{});  // unnamed global section

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(origin + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
            }
            ConfigSection section;
            section.name = trim(line.substr(1, line.size() - 2));
            section.line = lineno;
            if (section.name.empty()) {
                throw ParseError(origin + ":" + std::to_string(lineno) + ": empty section name");
            }
            cfg.sections.push_back(std::move(section));
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": expected 'key = value' or '[section]'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        ConfigSection& section = cfg.sections.back();
        if (section.values.count(key)) {
            throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                             "'");
        }
        section.values[key] = value;
    }
    return cfg;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

double to_double(const std::string& value, const std::string& key) {
    const char* b = value.data();
    const char* e = b + value.size();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e) {
        throw ParseError("config: key '" + key + "': '" + value + "' is not a number");
    }
    return out;
}

int to_int(const std::string& value, const std::string& key) {
    const char* b = value.data();
    const char* e = b + value.size();
    int out = 0;
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e) {
        throw ParseError("config: key '" + key + "': '" + value + "' is not an integer");
    }
    return out;
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw ParseError("config: key '" + key + "': '" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_double_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) out.push_back(to_double(item, key));
    return out;
}

}  // namespace da
