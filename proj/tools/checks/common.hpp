#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nilheat/group.hpp"

namespace nilheat::checks {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline GroupPoint random_point(GroupTag tag, Rng& rng, double scale = 1.0) {
    GroupPoint g{tag, {}};
    for (int i = 0; i < g.dim(); ++i) g.x[i] = uniform(rng, -scale, scale);
    return g;
}

inline AlgebraVector random_algebra(GroupTag tag, Rng& rng, double scale = 1.0) {
    AlgebraVector a{tag, {}};
    for (int i = 0; i < a.dim(); ++i) a.a[i] = uniform(rng, -scale, scale);
    return a;
}

inline double max_diff(const GroupPoint& a, const GroupPoint& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.x[i] - b.x[i]));
    return m;
}

inline double max_diff(const AlgebraVector& a, const AlgebraVector& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

inline std::string sci(double v) { return fmt::format("{:.3g}", v); }

}  // namespace nilheat::checks
