#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilheat::cli {

// Exit status 2: bad arguments, bad configuration or a violated precondition.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exit status 3: output could not be written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value file. Blank lines and lines starting with '#' are skipped, values may be quoted.
class ConfigFile {
public:
    ConfigFile() = default;
    static ConfigFile load(const std::string& path);

    std::optional<std::string> get(const std::string& key) const;
    // Rejects keys not in the allowed list.
    void restrict_to(const std::vector<std::string>& allowed) const;

private:
    std::map<std::string, std::string> values_;
};

double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);

}  // namespace nilheat::cli
