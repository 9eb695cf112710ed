#pragma once

#include <vector>

namespace nilheat {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

// Composite rule: n-point Gauss-Legendre on each interval [breaks[i], breaks[i+1]].
Rule composite_gauss(const std::vector<double>& breaks, int n);

// Composite rule on [a, b] split into equal panels.
Rule composite_gauss(double a, double b, int panels, int n);

}  // namespace nilheat
