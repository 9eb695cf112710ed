#include <doctest.h>

#include <cmath>

#include "nilheat/kernel.hpp"

using namespace nilheat;

TEST_CASE("Engel integrand under lambda -> -lambda is the conjugate") {
    const GroupPoint x = make_point(GroupTag::Engel, {0.3, -0.2, 0.1, 0.05});
    for (double th : {-0.8, 0.0, 0.4}) {
        const cplx a = integrand({GroupTag::Engel, 1.7, -0.6, 0.0}, th, x, 0.25);
        const cplx b = integrand({GroupTag::Engel, -1.7, -0.6, 0.0}, th, x, 0.25);
        CHECK(std::abs(b - std::conj(a)) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("integrand at the identity is a positive propagator value") {
    const cplx v = integrand({GroupTag::Cartan, 0.6, 0.8, -0.3}, 0.2, identity(GroupTag::Cartan), 0.25);
    CHECK(v.real() > 0.0);
    CHECK(v.imag() == 0.0);
}

TEST_CASE("refined doubles the node counts") {
    const QuadratureConfig c = default_quadrature(GroupTag::Engel);
    const QuadratureConfig r = refined(c);
    CHECK(r.b_nodes == 2 * c.b_nodes);
    CHECK(r.r_nodes == 2 * c.r_nodes);
    CHECK(r.phi_nodes == 2 * c.phi_nodes);
}

TEST_CASE("invalid quadrature settings are rejected") {
    QuadratureConfig c = default_quadrature(GroupTag::Engel);
    c.b_min = 1.0;
    CHECK_THROWS_AS(validate(c), ContractViolation);
    c = default_quadrature(GroupTag::Engel);
    c.r_nodes = 0;
    CHECK_THROWS_AS(validate(c), ContractViolation);
    CHECK_THROWS_AS(heat_kernel(identity(GroupTag::Engel), -1.0, default_quadrature(GroupTag::Engel)), ContractViolation);
    CHECK_THROWS_AS(heat_kernel_g4(identity(GroupTag::Cartan), 0.25), ContractViolation);
}

TEST_CASE("Engel kernel at the identity") {
    const KernelResult k = heat_kernel_g4(identity(GroupTag::Engel), 0.25);
    CHECK(k.value > 0.0);
    CHECK(k.tail_estimate < 1e-3 * k.value);
    CHECK(k.imag_residual == 0.0);
    CHECK(k.node_count > 0);
    // Away from the origin along x1 the value drops but stays positive.
    const KernelResult off = heat_kernel_g4(make_point(GroupTag::Engel, {0.3, 0, 0, 0}), 0.25);
    CHECK(off.value > 0.0);
    CHECK(off.value < k.value);
}

TEST_CASE("Engel kernel inverse symmetry") {
    const GroupPoint x = make_point(GroupTag::Engel, {0.2, 0.1, -0.05, 0.02});
    const KernelResult a = heat_kernel_g4(x, 0.25);
    const KernelResult b = heat_kernel_g4(inverse(x), 0.25);
    CHECK(std::abs(a.value - b.value) <= a.tail_estimate + b.tail_estimate);
}
