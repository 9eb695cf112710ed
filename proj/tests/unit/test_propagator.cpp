#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nilheat/propagator.hpp"

using namespace nilheat;

TEST_CASE("hamiltonian is symmetric tridiagonal with the quartic potential") {
    const ThetaGrid g{4.0, 101};
    const Hamiltonian H = assemble_hamiltonian({1.0, -1.0, 1.0}, g);
    REQUIRE(H.diag.size() == 101);
    REQUIRE(H.off.size() == 100);
    const double h = g.h();
    for (int i : {0, 37, 50, 100}) {
        const double th = g.theta(i);
        CHECK(H.diag[i] == doctest::Approx(2.0 / (h * h) + std::pow(th * th - 1.0, 2)));
    }
    for (double o : H.off) CHECK(o == doctest::Approx(-1.0 / (h * h)));
}

TEST_CASE("free Laplacian has the discrete Dirichlet spectrum") {
    const ThetaGrid g{8.0, 401};
    const SpectralDecomposition dec = decompose({0.0, 0.0, 1.0}, g, 4);
    for (int j = 0; j < 4; ++j) {
        const double s = std::sin((j + 1) * std::numbers::pi / (2.0 * (g.n + 1)));
        CHECK(dec.energies[j] == doctest::Approx(4.0 / (g.h() * g.h()) * s * s).epsilon(1e-10));
    }
}

TEST_CASE("constant potential shifts the spectrum by b squared") {
    const ThetaGrid g{8.0, 401};
    const SpectralDecomposition a = decompose({0.0, 0.0, 1.0}, g, 5);
    const SpectralDecomposition b = decompose({0.0, 1.5, 1.0}, g, 5);
    for (int j = 0; j < 5; ++j) CHECK(b.energies[j] - a.energies[j] == doctest::Approx(2.25).epsilon(1e-11));
}

TEST_CASE("ground energies") {
    CHECK(ground_energy({1.0, 0.0, 1.0}) == doctest::Approx(1.0604).epsilon(1e-3));
    CHECK(ground_energy({0.0, 2.0, 1.0}) == 4.0);
    const double well = ground_energy({1.0, -4.0, 1.0});
    CHECK(std::abs(well - 4.0) < 0.3 * 4.0);
}

TEST_CASE("propagator is symmetric and matches the Gaussian without potential") {
    const ThetaGrid g{8.0, 4097};
    const SpectralDecomposition dec = decompose({0.0, 1.0, 1.0}, g, 200);
    const double tau = 0.25;
    const PropagatorValue v = psi_eval(dec, tau, g.theta(2048), g.theta(2048));
    CHECK(v.value == doctest::Approx(std::exp(-tau) / std::sqrt(4 * std::numbers::pi * tau)).epsilon(1e-5));
    CHECK_FALSE(v.truncated);
    CHECK(psi_eval(dec, tau, 0.31, -0.7).value == psi_eval(dec, tau, -0.7, 0.31).value);
}

TEST_CASE("too few modes are flagged") {
    const SpectralDecomposition dec = decompose({1.0, 0.0, 1.0}, {8.0, 512}, 3);
    CHECK(psi_eval(dec, 0.01, 0.0, 0.0).truncated);
}

TEST_CASE("psi_matrix agrees with psi_eval on nodes") {
    const ThetaGrid g{6.0, 301};
    const SpectralDecomposition dec = decompose({1.0, -1.0, 1.0}, g, 60);
    const std::vector<double> m = psi_matrix(dec, 0.3);
    for (int a : {10, 150, 200})
        for (int b : {40, 150, 290})
            CHECK(m[static_cast<std::size_t>(a) * g.n + b] ==
                  doctest::Approx(psi_eval(dec, 0.3, g.theta(a), g.theta(b)).value).epsilon(1e-12));
}

TEST_CASE("sign-flipped parameters share the decomposition") {
    DecompositionCache cache;
    const ThetaGrid g{8.0, 256};
    auto a = cache.get({1.0, -2.0, 1.0}, g, 10);
    auto b = cache.get({-1.0, 2.0, 1.0}, g, 10);
    CHECK(a == b);
    CHECK(cache.size() == 1);
}

TEST_CASE("contract violations") {
    CHECK_THROWS_AS(validate(ThetaGrid{8.0, 2}), ContractViolation);
    CHECK_THROWS_AS(validate(ThetaGrid{-1.0, 100}), ContractViolation);
    const SpectralDecomposition dec = decompose({1.0, 0.0, 1.0}, {4.0, 128}, 4);
    CHECK_THROWS_AS(psi_eval(dec, 0.0, 0.0, 0.0), ContractViolation);
    CHECK_THROWS_AS(psi_eval(dec, 0.1, 5.0, 0.0), DomainError);
}
