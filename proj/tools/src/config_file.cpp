#include "config_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace nilheat::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    ConfigFile cfg;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw UsageError(path + ":" + std::to_string(number) + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void ConfigFile::restrict_to(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : values_)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw UsageError("unknown config key '" + key + "'");
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw UsageError(what + ": '" + text + "' is not a finite number");
    return v;
}

long long parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) throw UsageError(what + ": '" + text + "' is not an integer");
    return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw UsageError(what + ": '" + text + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_double(text.substr(start, comma - start), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace nilheat::cli
