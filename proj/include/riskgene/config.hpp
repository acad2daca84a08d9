#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riskgene {

// Flat key=value store backing both config files and command-line flags.
// Files hold one `key = value` per line with `#` comments; later entries
// overwrite earlier ones, and flags are applied after the file so they win.
class KeyValueConfig {
public:
    static KeyValueConfig from_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::uint64_t> get_u64s(const std::string& key,
                                        std::vector<std::uint64_t> fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Strict scalar parsers; the whole token must be consumed.
std::uint64_t parse_u64(const std::string& text, const std::string& what);
double parse_double(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

std::vector<std::string> split_list(const std::string& text, char sep);
std::string trim(const std::string& text);

}  // namespace riskgene
