#pragma once

#include <stdexcept>

namespace nilheat {

// Thrown when an argument leaves the region a discretisation can represent.
struct DomainError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Uniform grid on [-L, L] with n samples, endpoints included.
struct ThetaGrid {
    double L = 8.0;
    int n = 1024;

    double h() const { return 2.0 * L / (n - 1); }
    double theta(int i) const { return -L + i * h(); }
    bool operator==(const ThetaGrid&) const = default;
};

}  // namespace nilheat
