#include "output.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <filesystem>
#include <iostream>
#include <system_error>

#include "config_file.hpp"

namespace nilheat::cli {

AtomicOutput::AtomicOutput(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    temp_ = path_ + ".tmp." + std::to_string(::getpid());
    file_.open(temp_, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!file_) throw IoError("cannot open " + path_ + " for writing");
}

AtomicOutput::~AtomicOutput() {
    if (!temp_.empty() && !committed_) {
        file_.close();
        std::error_code ec;
        std::filesystem::remove(temp_, ec);
    }
}

std::ostream& AtomicOutput::stream() { return path_.empty() ? std::cout : static_cast<std::ostream&>(file_); }

void AtomicOutput::commit() {
    if (path_.empty()) {
        std::cout.flush();
        return;
    }
    file_.close();
    if (!file_) throw IoError("write to " + path_ + " failed");
    std::error_code ec;
    std::filesystem::rename(temp_, path_, ec);
    if (ec) throw IoError("cannot move output into place at " + path_ + ": " + ec.message());
    committed_ = true;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace nilheat::cli
