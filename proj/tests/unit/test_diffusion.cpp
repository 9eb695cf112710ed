#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nilheat/diffusion.hpp"
#include "nilheat/parallel.hpp"

using namespace nilheat;

TEST_CASE("counter-based streams are reproducible") {
    CounterRng a(5, 3), b(5, 3), c(5, 4);
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
    CounterRng u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("x1 is Brownian with variance 2t") {
    SimConfig c;
    c.t = 0.25;
    c.n_paths = 20000;
    c.n_steps = 100;
    const Moments m = moments(simulate(c));
    CHECK(std::abs(m.mean[0]) <= 3 * m.mean_se[0]);
    CHECK(std::abs(m.var[0] - 2 * c.t) <= 3 * m.var_se[0]);
}

TEST_CASE("Engel moments of x3 and x4") {
    SimConfig c;
    c.t = 0.5;
    c.n_paths = 100000;
    c.n_steps = 400;
    const Moments m = moments(simulate(c));
    CHECK(std::abs(m.var[2] - 2 * c.t * c.t) <= 3 * m.var_se[2]);
    CHECK(std::abs(m.var[3] - 2 * c.t * c.t * c.t) <= 3 * m.var_se[3]);
}

TEST_CASE("same seed gives the same samples for any thread count") {
    SimConfig c;
    c.tag = GroupTag::Cartan;
    c.n_paths = 3000;
    c.n_steps = 100;
    set_threads(1);
    std::ostringstream a, b;
    write_csv(simulate(c), a);
    set_threads(4);
    write_csv(simulate(c), b);
    set_threads(1);
    CHECK(a.str() == b.str());
    c.seed += 1;
    std::ostringstream d;
    write_csv(simulate(c), d);
    CHECK(a.str() != d.str());
}

TEST_CASE("sample distribution is symmetric in x1") {
    SimConfig c;
    c.n_paths = 20000;
    c.n_steps = 100;
    const SampleSet s = simulate(c);
    long long pos = 0;
    for (const GroupPoint& g : s.points) pos += g[0] > 0;
    const double frac = static_cast<double>(pos) / s.points.size();
    CHECK(std::abs(frac - 0.5) < 3 * 0.5 / std::sqrt(static_cast<double>(s.points.size())));
}

namespace {

// Independent standard normal coordinates in all four Engel slots.
SampleSet normal_samples(long long n) {
    SampleSet s;
    s.config.n_paths = n;
    CounterRng rng(99, 0);
    for (long long i = 0; i < n; ++i) {
        GroupPoint g = identity(GroupTag::Engel);
        for (int k = 0; k < 4; ++k) g[k] = rng.normal();
        s.points.push_back(g);
    }
    return s;
}

}  // namespace

TEST_CASE("KDE of standard normal samples") {
    const SampleSet s = normal_samples(200000);
    const double h = 0.2;
    const std::array<double, 5> bw{h, h, h, h, 0};
    // A Gaussian kernel estimate is unbiased for the density convolved with the kernel.
    const double smoothed = 1.0 / (2 * std::numbers::pi * (1 + h * h));
    const Estimate e = kde_estimate(s, identity(GroupTag::Engel), bw);
    CHECK(std::abs(e.value - smoothed * smoothed) <= 3 * e.std_error);

    // Along x1 the estimate integrates to the smoothed density of the other three coordinates at 0.
    double mass = 0;
    const double dx = 0.1;
    for (double x = -6; x <= 6; x += dx) {
        GroupPoint p = identity(GroupTag::Engel);
        p[0] = x;
        mass += dx * kde_estimate(s, p, bw, 2).value;
    }
    CHECK(std::abs(mass / std::pow(smoothed, 1.5) - 1.0) <= 0.03);
}

TEST_CASE("simulation config is validated") {
    SimConfig c;
    c.t = 0.0;
    CHECK_THROWS_AS(validate(c), ContractViolation);
    c = SimConfig{};
    c.n_paths = 0;
    CHECK_THROWS_AS(validate(c), ContractViolation);
}
