#pragma once

#include <fstream>
#include <string>

namespace nilheat::cli {

// Writes to a temporary file next to the target and renames it into place on commit().
// Without a path the text goes to stdout. An uncommitted temporary is removed.
class AtomicOutput {
public:
    explicit AtomicOutput(std::string path);
    ~AtomicOutput();
    AtomicOutput(const AtomicOutput&) = delete;
    AtomicOutput& operator=(const AtomicOutput&) = delete;

    std::ostream& stream();
    void commit();

private:
    std::string path_;
    std::string temp_;
    std::ofstream file_;
    bool committed_ = false;
};

// 17 significant digits.
std::string num(double v);

}  // namespace nilheat::cli
