#include "riskgene/config.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "riskgene/errors.hpp"
#include "riskgene/io.hpp"

namespace riskgene {

std::string trim(const std::string& text) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, sep)) parts.push_back(trim(item));
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    const std::string token = trim(text);
    if (token.empty() || token[0] == '-') {
        throw usage_error(what + ": expected a nonnegative integer, got '" + text + "'");
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
    if (errno != 0 || end != token.c_str() + token.size()) {
        throw usage_error(what + ": expected a nonnegative integer, got '" + text + "'");
    }
    return value;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string token = trim(text);
    if (token.empty()) throw usage_error(what + ": expected a number, got an empty value");
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(token.c_str(), &end);
    if (errno != 0 || end != token.c_str() + token.size()) {
        throw usage_error(what + ": expected a number, got '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string token = trim(text);
    if (token == "true" || token == "1" || token == "yes" || token == "on") return true;
    if (token == "false" || token == "0" || token == "no" || token == "off") return false;
    throw usage_error(what + ": expected true/false, got '" + text + "'");
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
    KeyValueConfig config;
    const std::string content = read_text_file(path);
    std::istringstream stream(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = trim(line);
        if (entry.empty()) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw usage_error(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + entry + "'");
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key.empty()) {
            throw usage_error(path.string() + ":" + std::to_string(line_no) + ": empty key");
        }
        config.set(key, value);
    }
    return config;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_u64(it->second, key);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(it->second, key);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_bool(it->second, key);
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                std::vector<double> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> values;
    for (const std::string& part : split_list(it->second, ',')) {
        values.push_back(parse_double(part, key));
    }
    if (values.empty()) throw usage_error(key + ": expected a comma-separated list of numbers");
    return values;
}

std::vector<std::uint64_t> KeyValueConfig::get_u64s(const std::string& key,
                                                    std::vector<std::uint64_t> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<std::uint64_t> values;
    for (const std::string& part : split_list(it->second, ',')) {
        values.push_back(parse_u64(part, key));
    }
    if (values.empty()) throw usage_error(key + ": expected a comma-separated list of integers");
    return values;
}

}  // namespace riskgene
