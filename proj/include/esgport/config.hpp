/**
 * @file config.hpp
 * @brief Plain-text run configuration: `[section]` headers and `key = value`
 *        lines, addressed as `section.key`. `#` and `;` start comments.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esgport::config {

class Config {
public:
    /// Throws ConfigParse with `source:line` on malformed input.
    static Config parse(std::istream& in, std::string_view source = "<config>");
    /// Throws FileNotFound naming the path.
    static Config load(const std::filesystem::path& path);

    /// Insert or override `section.key`.
    void set(std::string key, std::string value);
    /// Apply `section.key=value`; throws ConfigParse on malformed text.
    void apply_override(std::string_view assignment);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    std::string require(std::string_view key) const;

    std::string get_string(std::string_view key, std::string_view fallback) const;
    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;
    /// Comma-separated list; empty items dropped.
    std::vector<std::string> get_list(std::string_view key) const;
    std::vector<double> get_doubles(std::string_view key, const std::vector<double>& fallback) const;

    /// Sorted `section.key=value` lines; the hashed form of the config.
    std::string canonical() const;
    std::uint64_t hash() const;

    const std::map<std::string, std::string, std::less<>>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string, std::less<>> values_;
};

std::string hex64(std::uint64_t value);

}  // namespace esgport::config
