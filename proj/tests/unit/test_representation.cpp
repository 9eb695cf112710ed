#include <doctest.h>

#include <cmath>

#include "nilheat/representation.hpp"

using namespace nilheat;

namespace {

const ThetaGrid kGrid{8.0, 1601};

WaveFunction gaussian(double centre = 0.0) {
    return sample(kGrid, [&](double th) { return cplx(std::exp(-(th - centre) * (th - centre)), 0.0); });
}

}  // namespace

TEST_CASE("identity acts trivially") {
    const WaveFunction psi = gaussian(0.3);
    for (DualPoint d : {DualPoint{GroupTag::Engel, 1.3, -0.4, 0.0}, DualPoint{GroupTag::Cartan, 0.8, 0.5, -0.2}}) {
        const WaveFunction out = rep_apply(d, identity(d.tag), psi);
        for (std::size_t i = 0; i < psi.values.size(); ++i) CHECK(std::abs(out.values[i] - psi.values[i]) == 0.0);
    }
}

TEST_CASE("Engel translation along x1") {
    const DualPoint d{GroupTag::Engel, 1.0, 0.5, 0.0};
    const double x1 = 0.25;
    const WaveFunction out = rep_apply(d, make_point(GroupTag::Engel, {x1, 0, 0, 0}), gaussian(), Interpolation::Trigonometric);
    double err = 0;
    for (int i = 200; i < kGrid.n - 200; ++i) {
        const double th = kGrid.theta(i);
        err = std::max(err, std::abs(out.values[i] - std::exp(-(th + x1) * (th + x1))));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("unitarity with the band-limited shift") {
    const WaveFunction psi = gaussian(-0.5);
    const DualPoint d{GroupTag::Cartan, 0.7, -0.6, 0.3};
    const WaveFunction out =
        rep_apply(d, make_point(GroupTag::Cartan, {0.37, 0.2, -0.4, 0.1, 0.9}), psi, Interpolation::Trigonometric);
    CHECK(l2_norm(out) == doctest::Approx(l2_norm(psi)).epsilon(1e-10));
}

TEST_CASE("phase_K5 special values") {
    const DualPoint d{GroupTag::Cartan, 1.0, 1.0, 2.0};
    CHECK(phase_K5(d, identity(GroupTag::Cartan), 0.7) == 0.0);
    CHECK(phase_K5({GroupTag::Cartan, 1.7, 0.0, 0.0}, make_point(GroupTag::Cartan, {0, 0, 0, 0.4, 0}), -1.3) ==
          doctest::Approx(1.7 * 0.4));
}

TEST_CASE("drep of X1 differentiates") {
    const WaveFunction psi = gaussian();
    const WaveFunction out = drep(1, {GroupTag::Engel, 1.0, 0.0, 0.0}, psi);
    double err = 0;
    for (int i = 0; i < kGrid.n; ++i) {
        const double th = kGrid.theta(i);
        err = std::max(err, std::abs(out.values[i] - (-2.0 * th * std::exp(-th * th))));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("gft_laplacian for Engel lambda = 2, mu = 0") {
    const WaveFunction psi = gaussian();
    const WaveFunction out = gft_laplacian({GroupTag::Engel, 2.0, 0.0, 0.0}, psi);
    double err = 0;
    for (int i = 100; i < kGrid.n - 100; ++i) {
        const double th = kGrid.theta(i);
        const double want = (4 * th * th - 2) * std::exp(-th * th) - std::pow(th, 4) * std::exp(-th * th);
        err = std::max(err, std::abs(out.values[i] - want));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("dual_to_quartic") {
    const QuarticParams e = dual_to_quartic({GroupTag::Engel, 2.0, 0.0, 0.0});
    CHECK(e.alpha == doctest::Approx(1.0));
    CHECK(e.beta == doctest::Approx(0.0));
    CHECK(e.time_scale == doctest::Approx(1.0));
    const QuarticParams c = dual_to_quartic({GroupTag::Cartan, 1.0, 0.0, 0.0});
    CHECK(c.alpha == doctest::Approx(0.5));
    CHECK(c.beta == doctest::Approx(0.0));
    CHECK(c.time_scale == doctest::Approx(1.0));
}

TEST_CASE("invalid dual points are rejected") {
    CHECK_THROWS_AS(validate(DualPoint{GroupTag::Engel, 0.0, 1.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(validate(DualPoint{GroupTag::Cartan, 0.0, 0.0, 1.0}), ContractViolation);
}
