#include <doctest.h>

#include <cmath>

#include "nilheat/quadrature.hpp"

using namespace nilheat;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
    for (int n : {1, 4, 12, 16}) {
        const Rule& r = gauss_legendre(n);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            const double want = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(s == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("nodes are symmetric and weights positive") {
    const Rule& r = gauss_legendre(9);
    for (int i = 0; i < 9; ++i) {
        CHECK(r.weights[i] > 0.0);
        CHECK(r.nodes[i] == doctest::Approx(-r.nodes[8 - i]).epsilon(1e-15));
    }
}

TEST_CASE("composite rules") {
    const Rule r = composite_gauss(0.0, 3.0, 5, 8);
    CHECK(r.nodes.size() == 40);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::exp(-r.nodes[i]);
    CHECK(s == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-14));
    const Rule b = composite_gauss(std::vector<double>{-1.0, 0.0, 2.0}, 6);
    double w = 0;
    for (double x : b.weights) w += x;
    CHECK(w == doctest::Approx(3.0).epsilon(1e-14));
}
