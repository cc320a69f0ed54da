#include "esgport/config.hpp"

#include "esgport/csv.hpp"
#include "esgport/errors.hpp"
#include "esgport/rng.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

namespace esgport::config {

namespace {

std::string bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    return "config key " + std::string(key) + " = '" + std::string(value) + "' is not " + std::string(expected);
}

}  // namespace

Config Config::parse(std::istream& in, std::string_view source) {
    Config cfg;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        const std::string text = csv::trim(std::string_view(line).substr(0, hash));
        if (text.empty()) continue;
        const auto where = std::string(source) + ":" + std::to_string(lineno);
        if (text.front() == '[') {
            if (text.back() != ']' || text.size() < 3) {
                throw Error(ErrorCode::ConfigParse, where + ": malformed section header");
            }
            section = csv::trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ConfigParse, where + ": expected key = value");
        const std::string key(csv::trim(text.substr(0, eq)));
        if (key.empty()) throw Error(ErrorCode::ConfigParse, where + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.values_.count(full)) throw Error(ErrorCode::ConfigParse, where + ": duplicate key " + full);
        cfg.values_[full] = std::string(csv::trim(text.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
    return parse(in, path.string());
}

void Config::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw Error(ErrorCode::ConfigParse, "override '" + std::string(assignment) + "' is not section.key=value");
    }
    set(std::string(csv::trim(assignment.substr(0, eq))), std::string(csv::trim(assignment.substr(eq + 1))));
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> Config::get(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::require(std::string_view key) const {
    auto v = get(key);
    if (!v || v->empty()) throw Error(ErrorCode::InvalidArgument, "missing config key " + std::string(key));
    return *v;
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
    auto v = get(key);
    return v ? *v : std::string(fallback);
}

double Config::get_double(std::string_view key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    const auto d = csv::try_parse_double(*v);
    if (!d) throw Error(ErrorCode::InvalidArgument, bad_value(key, *v, "a number"));
    return *d;
}

long long Config::get_int(std::string_view key, long long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    long long out = 0;
    const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size()) throw Error(ErrorCode::InvalidArgument, bad_value(key, *v, "an integer"));
    return out;
}

std::uint64_t Config::get_u64(std::string_view key, std::uint64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size()) {
        throw Error(ErrorCode::InvalidArgument, bad_value(key, *v, "an unsigned 64-bit integer"));
    }
    return out;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw Error(ErrorCode::InvalidArgument, bad_value(key, *v, "a boolean"));
}

std::vector<std::string> Config::get_list(std::string_view key) const {
    std::vector<std::string> out;
    const auto v = get(key);
    if (!v) return out;
    for (const auto& item : csv::split(*v, ',')) {
        auto t = std::string(csv::trim(item));
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::vector<double> Config::get_doubles(std::string_view key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& item : get_list(key)) {
        const auto d = csv::try_parse_double(item);
        if (!d) throw Error(ErrorCode::InvalidArgument, bad_value(key, item, "a number"));
        out.push_back(*d);
    }
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace esgport::config
