#include "nilheat/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <map>
#include <mutex>

#include "nilheat/group.hpp"

namespace nilheat {

const Rule& gauss_legendre(int n) {
    if (n < 1) throw ContractViolation("gauss_legendre: n must be positive");
    static std::mutex mutex;
    static std::map<int, Rule> rules;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = rules.find(n);
    if (it != rules.end()) return it->second;
    // Boost returns the nonnegative zeros in ascending order.
    const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
    Rule r;
    auto weight = [n](double x) {
        const double dp = boost::math::legendre_p_prime<double>(n, x);
        return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
        if (*z == 0.0) continue;
        r.nodes.push_back(-*z);
        r.weights.push_back(weight(*z));
    }
    for (double z : zeros) {
        r.nodes.push_back(z);
        r.weights.push_back(weight(z));
    }
    return rules.emplace(n, std::move(r)).first->second;
}

Rule composite_gauss(const std::vector<double>& breaks, int n) {
    const Rule& g = gauss_legendre(n);
    Rule out;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            out.nodes.push_back(mid + half * g.nodes[i]);
            out.weights.push_back(half * g.weights[i]);
        }
    }
    return out;
}

Rule composite_gauss(double a, double b, int panels, int n) {
    std::vector<double> breaks(panels + 1);
    for (int i = 0; i <= panels; ++i) breaks[i] = a + (b - a) * i / panels;
    return composite_gauss(breaks, n);
}

}  // namespace nilheat
