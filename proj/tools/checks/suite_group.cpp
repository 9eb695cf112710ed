#include "checks.hpp"
#include "common.hpp"

namespace nilheat::checks {

namespace {

constexpr GroupTag kTags[] = {GroupTag::Engel, GroupTag::Cartan};
constexpr int kTrials = 10000;

UnipotentMatrix commutator(const UnipotentMatrix& a, const UnipotentMatrix& b) {
    // [A, B] = BA - AB
    const UnipotentMatrix ab = matmul(a, b), ba = matmul(b, a);
    UnipotentMatrix c{a.tag, {}};
    for (std::size_t i = 0; i < c.m.size(); ++i) c.m[i] = ba.m[i] - ab.m[i];
    return c;
}

double matrix_diff(const UnipotentMatrix& a, const UnipotentMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) m = std::max(m, std::abs(a.m[i] - b.m[i]));
    return m;
}

// Expected [l_i, l_j] coefficient vector for i < j (1-based).
AlgebraVector table(GroupTag tag, int i, int j) {
    AlgebraVector r{tag, {}};
    if (i == 1 && j == 2) r.a[2] = 1.0;
    if (i == 1 && j == 3) r.a[3] = 1.0;
    if (tag == GroupTag::Cartan && i == 2 && j == 3) r.a[4] = 1.0;
    return r;
}

GroupPoint rk4_flow(int i, GroupPoint x, double s, int steps) {
    const double h = s / steps;
    auto f = [&](const GroupPoint& p) { return frame(i, p); };
    auto add = [](GroupPoint p, const TangentVector& v, double c) {
        for (int k = 0; k < p.dim(); ++k) p.x[k] += c * v.v[k];
        return p;
    };
    for (int n = 0; n < steps; ++n) {
        const TangentVector k1 = f(x);
        const TangentVector k2 = f(add(x, k1, 0.5 * h));
        const TangentVector k3 = f(add(x, k2, 0.5 * h));
        const TangentVector k4 = f(add(x, k3, h));
        for (int k = 0; k < x.dim(); ++k) x.x[k] += h / 6.0 * (k1.v[k] + 2 * k2.v[k] + 2 * k3.v[k] + k4.v[k]);
    }
    return x;
}

}  // namespace

SuiteResult group_suite() {
    SuiteResult r{"group"};
    Rng rng(20240601);

    for (GroupTag tag : kTags) {
        const std::string g = group_name(tag);
        const int dim = dimension(tag);

        bool table_ok = true, matrix_ok = true;
        for (int i = 1; i <= dim; ++i)
            for (int j = 1; j <= dim; ++j) {
                const AlgebraVector got = bracket(basis(tag, i), basis(tag, j));
                AlgebraVector want{tag, {}};
                if (i < j) want = table(tag, i, j);
                if (i > j)
                    for (double& v : (want = table(tag, j, i)).a) v = -v;
                table_ok = table_ok && got.a == want.a;
                matrix_ok = matrix_ok && matrix_diff(algebra_matrix(got),
                                                     commutator(algebra_matrix(basis(tag, i)),
                                                                algebra_matrix(basis(tag, j)))) == 0.0;
            }
        r.expect(g + " structure constants", table_ok, "all basis brackets equal the table exactly");
        r.expect(g + " bracket matches BA - AB on basis", matrix_ok);

        double assoc = 0, inv = 0, hom = 0, mat = 0, round = 0, jacobi = 0, nil = 0, comm = 0;
        for (int n = 0; n < kTrials; ++n) {
            const GroupPoint a = random_point(tag, rng), b = random_point(tag, rng), c = random_point(tag, rng);
            assoc = std::max(assoc, max_diff(multiply(multiply(a, b), c), multiply(a, multiply(b, c))));
            inv = std::max({inv, max_diff(multiply(a, inverse(a)), identity(tag)),
                            max_diff(multiply(inverse(a), a), identity(tag))});
            hom = std::max(hom, matrix_diff(to_matrix(multiply(a, b)), matmul(to_matrix(a), to_matrix(b))));
            mat = std::max(mat, max_diff(from_matrix(matmul(to_matrix(a), to_matrix(b))), multiply(a, b)));
            round = std::max(round, max_diff(exp_coords(log_coords(a)), a));
            const AlgebraVector u = random_algebra(tag, rng), v = random_algebra(tag, rng), w = random_algebra(tag, rng);
            const AlgebraVector j1 = bracket(u, bracket(v, w)), j2 = bracket(v, bracket(w, u)), j3 = bracket(w, bracket(u, v));
            AlgebraVector sum{tag, {}};
            for (int k = 0; k < dim; ++k) sum.a[k] = j1.a[k] + j2.a[k] + j3.a[k];
            jacobi = std::max(jacobi, max_diff(sum, AlgebraVector{tag, {}}));
            nil = std::max(nil, max_diff(bracket(random_algebra(tag, rng), bracket(u, bracket(v, w))), AlgebraVector{tag, {}}));
            comm = std::max(comm, matrix_diff(algebra_matrix(bracket(u, v)),
                                              commutator(algebra_matrix(u), algebra_matrix(v))));
        }
        const std::string trials = fmt::format("{} trials, max error ", kTrials);
        r.expect(g + " associativity", assoc <= 1e-12, trials + sci(assoc));
        r.expect(g + " inverse", inv <= 1e-12, trials + sci(inv));
        r.expect(g + " matrix homomorphism", hom <= 1e-12, trials + sci(hom));
        r.expect(g + " product agrees with matrix product", mat <= 1e-12, trials + sci(mat));
        r.expect(g + " exp/log round trip", round <= 1e-12, trials + sci(round));
        r.expect(g + " Jacobi identity", jacobi <= 1e-12, trials + sci(jacobi));
        r.expect(g + " bracket matches BA - AB", comm <= 1e-12, trials + sci(comm));
        r.expect(g + " 3-step nilpotency", nil <= 1e-12, trials + sci(nil));

        double flow = 0;
        for (int n = 0; n < kTrials; ++n) {
            const int i = 1 + static_cast<int>(rng() % dim);
            const GroupPoint x = random_point(tag, rng);
            const double s = uniform(rng, -1.0, 1.0);
            AlgebraVector step = basis(tag, i);
            for (double& v : step.a) v *= s;
            flow = std::max(flow, max_diff(rk4_flow(i, x, s, 40), multiply(x, exp_coords(step))));
        }
        r.expect(g + " frame flow is right translation", flow <= 1e-8, trials + sci(flow));

        bool frame_id = true;
        for (int i = 1; i <= dim; ++i) {
            const TangentVector v = frame(i, identity(tag));
            for (int k = 0; k < dim; ++k) frame_id = frame_id && v.v[k] == (k == i - 1 ? 1.0 : 0.0);
        }
        r.expect(g + " frame at identity is the standard basis", frame_id);

        const GroupPoint ex = multiply(make_point(tag, tag == GroupTag::Engel ? std::initializer_list<double>{1, 0, 0, 0}
                                                                               : std::initializer_list<double>{1, 0, 0, 0, 0}),
                                       make_point(tag, tag == GroupTag::Engel ? std::initializer_list<double>{0, 1, 0, 0}
                                                                               : std::initializer_list<double>{0, 1, 0, 0, 0}));
        const GroupPoint want = tag == GroupTag::Engel ? make_point(tag, {1, 1, -1, 0.5}) : make_point(tag, {1, 1, -1, 0.5, 0.5});
        r.expect(g + " product example l1 * l2", max_diff(ex, want) == 0.0, to_string(ex));

        bool malformed = false;
        UnipotentMatrix m = to_matrix(random_point(tag, rng));
        m(0, 2) += 0.1;
        try {
            from_matrix(m);
        } catch (const MalformedMatrix&) {
            malformed = true;
        }
        r.expect(g + " from_matrix rejects a broken pattern", malformed);
    }

    const GroupPoint x = make_point(GroupTag::Engel, {0.7, -1.3, 0.4, 2.0});
    const UnipotentMatrix m = to_matrix(x);
    r.expect("g4 matrix entries (0,1) and (0,2)", m(0, 1) == -0.7 && std::abs(m(0, 2) - 0.245) < 1e-15,
             fmt::format("{} {}", m(0, 1), m(0, 2)));
    r.expect("g4 inverse example", max_diff(inverse(make_point(GroupTag::Engel, {1, 1, 0, 0})),
                                            make_point(GroupTag::Engel, {-1, -1, -1, -0.5})) < 1e-15);
    r.expect("g4 exp example", max_diff(exp_coords(make_algebra(GroupTag::Engel, {1, 1, 0, 0})),
                                        make_point(GroupTag::Engel, {1, 1, -0.5, 1.0 / 6.0})) < 1e-15);
    r.expect("g5 exp example", max_diff(exp_coords(make_algebra(GroupTag::Cartan, {0, 1, 1, 0, 0})),
                                        make_point(GroupTag::Cartan, {0, 1, 1, 0, -0.5})) < 1e-15);
    r.expect("g4 X2 at x1 = 2", frame(2, make_point(GroupTag::Engel, {2, 0, 0, 0})).v ==
                                    std::array<double, 5>{0, 1, -2, 2, 0});
    r.expect("g5 X2 at (1,2,0,0,0)", frame(2, make_point(GroupTag::Cartan, {1, 2, 0, 0, 0})).v ==
                                         std::array<double, 5>{0, 1, -1, 0.5, 2});
    return r;
}

}  // namespace nilheat::checks
