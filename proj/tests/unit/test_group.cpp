#include <doctest.h>

#include <random>

#include "nilheat/group.hpp"

using namespace nilheat;

namespace {

void check_point(const GroupPoint& got, std::initializer_list<double> want, double tol = 1e-14) {
    int i = 0;
    for (double w : want) CHECK(got[i++] == doctest::Approx(w).epsilon(tol));
}

GroupPoint random_point(GroupTag tag, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    GroupPoint g = identity(tag);
    for (int i = 0; i < dimension(tag); ++i) g[i] = u(rng);
    return g;
}

}  // namespace

TEST_CASE("identity is neutral") {
    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan}) {
        const GroupPoint x = tag == GroupTag::Engel ? make_point(tag, {0.3, -1.2, 0.5, 2.0})
                                                    : make_point(tag, {0.3, -1.2, 0.5, 2.0, -0.7});
        const GroupPoint l = multiply(identity(tag), x), r = multiply(x, identity(tag));
        for (int i = 0; i < dimension(tag); ++i) {
            CHECK(l[i] == x[i]);
            CHECK(r[i] == x[i]);
        }
    }
}

TEST_CASE("products of the generators") {
    check_point(multiply(make_point(GroupTag::Engel, {1, 0, 0, 0}), make_point(GroupTag::Engel, {0, 1, 0, 0})),
                {1, 1, -1, 0.5});
    check_point(multiply(make_point(GroupTag::Cartan, {1, 0, 0, 0, 0}), make_point(GroupTag::Cartan, {0, 1, 0, 0, 0})),
                {1, 1, -1, 0.5, 0.5});
}

TEST_CASE("inverse") {
    check_point(inverse(identity(GroupTag::Engel)), {0, 0, 0, 0});
    check_point(inverse(make_point(GroupTag::Engel, {1, 1, 0, 0})), {-1, -1, -1, -0.5});
    std::mt19937_64 rng(11);
    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan})
        for (int k = 0; k < 200; ++k) {
            const GroupPoint g = random_point(tag, rng);
            const GroupPoint e = multiply(inverse(g), g);
            for (int i = 0; i < dimension(tag); ++i) CHECK(std::abs(e[i]) < 1e-12);
        }
}

TEST_CASE("exponential coordinates") {
    check_point(exp_coords(make_algebra(GroupTag::Engel, {2.5, 0, 0, 0})), {2.5, 0, 0, 0});
    check_point(exp_coords(make_algebra(GroupTag::Engel, {1, 1, 0, 0})), {1, 1, -0.5, 1.0 / 6.0});
    const GroupPoint c = exp_coords(make_algebra(GroupTag::Cartan, {0, 1, 1, 0, 0}));
    CHECK(c[2] == doctest::Approx(1.0));
    CHECK(c[4] == doctest::Approx(-0.5));
    const AlgebraVector a = log_coords(make_point(GroupTag::Engel, {1, 1, -0.5, 1.0 / 6.0}));
    for (int i = 0; i < 4; ++i) CHECK(a[i] == doctest::Approx(i < 2 ? 1.0 : 0.0).epsilon(1e-14));
    const AlgebraVector z = log_coords(identity(GroupTag::Cartan));
    for (int i = 0; i < 5; ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("log inverts exp on random points") {
    std::mt19937_64 rng(12);
    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan})
        for (int k = 0; k < 200; ++k) {
            const GroupPoint x = random_point(tag, rng);
            const GroupPoint y = exp_coords(log_coords(x));
            for (int i = 0; i < dimension(tag); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
        }
}

TEST_CASE("matrix presentation is a homomorphism") {
    std::mt19937_64 rng(13);
    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan})
        for (int k = 0; k < 100; ++k) {
            const GroupPoint g = random_point(tag, rng), h = random_point(tag, rng);
            const GroupPoint via = from_matrix(matmul(to_matrix(g), to_matrix(h)));
            const GroupPoint direct = multiply(g, h);
            for (int i = 0; i < dimension(tag); ++i) CHECK(via[i] == doctest::Approx(direct[i]).epsilon(1e-12));
        }
}

TEST_CASE("from_matrix rejects a matrix outside the group") {
    UnipotentMatrix m = to_matrix(make_point(GroupTag::Engel, {1, 2, 3, 4}));
    m(1, 0) = 0.5;
    CHECK_THROWS_AS(from_matrix(m), MalformedMatrix);
}

TEST_CASE("brackets") {
    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan}) {
        const AlgebraVector b12 = bracket(basis(tag, 1), basis(tag, 2));
        for (int i = 0; i < dimension(tag); ++i) CHECK(b12[i] == (i == 2 ? 1.0 : 0.0));
    }
    const AlgebraVector e23 = bracket(basis(GroupTag::Engel, 2), basis(GroupTag::Engel, 3));
    for (int i = 0; i < 4; ++i) CHECK(e23[i] == 0.0);
    const AlgebraVector c23 = bracket(basis(GroupTag::Cartan, 2), basis(GroupTag::Cartan, 3));
    for (int i = 0; i < 5; ++i) CHECK(c23[i] == (i == 4 ? 1.0 : 0.0));
}

TEST_CASE("frame fields") {
    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan})
        for (int i = 1; i <= dimension(tag); ++i) {
            const TangentVector v = frame(i, identity(tag));
            for (int j = 0; j < dimension(tag); ++j) CHECK(v[j] == (j == i - 1 ? 1.0 : 0.0));
        }
    const TangentVector e = frame(2, make_point(GroupTag::Engel, {2, 0, 0, 0}));
    check_point(GroupPoint{GroupTag::Engel, e.v}, {0, 1, -2, 2});
    const TangentVector c = frame(2, make_point(GroupTag::Cartan, {1, 2, 0, 0, 0}));
    check_point(GroupPoint{GroupTag::Cartan, c.v}, {0, 1, -1, 0.5, 2});
}

TEST_CASE("Cartan rotation is an automorphism") {
    const GroupPoint g = make_point(GroupTag::Cartan, {0.4, -0.3, 0.2, 0.1, 0.5});
    const GroupPoint h = make_point(GroupTag::Cartan, {-1.0, 0.7, 0.3, -0.2, 0.6});
    const double phi = 0.9;
    const GroupPoint lhs = rotate_cartan(multiply(g, h), phi);
    const GroupPoint rhs = multiply(rotate_cartan(g, phi), rotate_cartan(h, phi));
    for (int i = 0; i < 5; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
}

TEST_CASE("make_point checks the arity") {
    CHECK_THROWS_AS(make_point(GroupTag::Cartan, {0, 0, 0, 0}), ContractViolation);
}
