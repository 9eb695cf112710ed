#include "checks.hpp"
#include "common.hpp"

#include "nilheat/propagator.hpp"
#include "nilheat/representation.hpp"

namespace nilheat::checks {

namespace {

constexpr cplx I{0.0, 1.0};

DualPoint random_dual(GroupTag tag, Rng& rng) {
    DualPoint d{tag};
    if (tag == GroupTag::Engel) {
        d.lambda = uniform(rng, 0.5, 2.0) * (rng() % 2 ? 1.0 : -1.0);
        d.mu = uniform(rng, -2.0, 2.0);
    } else {
        do {
            d.lambda = uniform(rng, -1.5, 1.5);
            d.mu = uniform(rng, -1.5, 1.5);
        } while (d.lambda * d.lambda + d.mu * d.mu < 0.25);
        d.nu = uniform(rng, -2.0, 2.0);
    }
    return d;
}

WaveFunction gaussian(const ThetaGrid& g, double width = 1.0, double k = 0.3) {
    return sample(g, [&](double th) { return std::exp(-th * th / (2.0 * width * width) + I * k * th); });
}

double sup_diff(const WaveFunction& a, const WaveFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

WaveFunction combine(const WaveFunction& a, const WaveFunction& b, cplx ca, cplx cb) {
    WaveFunction out = a;
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = ca * a.values[i] + cb * b.values[i];
    return out;
}

WaveFunction sum_of_squares(const DualPoint& d, const WaveFunction& psi) {
    return combine(drep(1, d, drep(1, d, psi)), drep(2, d, drep(2, d, psi)), 1.0, 1.0);
}

// Every other sample of a grid with 2n - 1 points sits on the n-point grid.
WaveFunction restrict_to_coarse(const WaveFunction& fine, const ThetaGrid& coarse) {
    WaveFunction out{coarse, std::vector<cplx>(coarse.n)};
    for (int i = 0; i < coarse.n; ++i) out.values[i] = fine.values[2 * i];
    return out;
}

// Second implementation of the Cartan phase written from the formula, used as an oracle.
double phase_oracle(double l, double m, double v, const std::array<double, 5>& x, double th) {
    const double S = l * l + m * m;
    const double w = m * x[0] - l * x[1];
    const double cubic = l * l * std::pow(x[0], 3) + 3 * l * m * x[0] * x[0] * x[1] + 3 * m * m * x[0] * x[1] * x[1] -
                         l * m * std::pow(x[1], 3);
    const double lin = S * x[2] + m * m * x[0] * x[1] + 0.5 * l * m * (x[0] * x[0] - x[1] * x[1]);
    return -v * w / (2 * S) + l * x[3] + m * x[4] - m * cubic / (6 * S) - lin * th - 0.5 * S * w * th * th;
}

// Explicit RK4 for d psi/dt = A psi with a step inside the stability region of the largest eigenvalue.
WaveFunction rk4_evolve(const std::function<WaveFunction(const WaveFunction&)>& A, WaveFunction psi, double t,
                        double spectral_radius) {
    const int steps = static_cast<int>(std::ceil(t * spectral_radius / 1.2));
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        const WaveFunction k1 = A(psi);
        const WaveFunction k2 = A(combine(psi, k1, 1.0, 0.5 * dt));
        const WaveFunction k3 = A(combine(psi, k2, 1.0, 0.5 * dt));
        const WaveFunction k4 = A(combine(psi, k3, 1.0, dt));
        for (std::size_t i = 0; i < psi.values.size(); ++i)
            psi.values[i] += dt / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
    }
    return psi;
}

WaveFunction spectral_evolve(const SpectralDecomposition& dec, const WaveFunction& psi, double tau) {
    const int n = dec.grid.n;
    const double h = dec.grid.h();
    WaveFunction out{dec.grid, std::vector<cplx>(n)};
    for (int j = 0; j < dec.k(); ++j) {
        const double* f = dec.mode(j);
        cplx c = 0.0;
        for (int i = 0; i < n; ++i) c += h * f[i] * psi.values[i];
        c *= std::exp(-dec.energies[j] * tau);
        for (int i = 0; i < n; ++i) out.values[i] += c * f[i];
    }
    return out;
}

}  // namespace

SuiteResult representation_suite() {
    SuiteResult r{"representation"};
    Rng rng(77001);
    const ThetaGrid grid{8.0, 1024};
    const WaveFunction psi = gaussian(grid);

    for (GroupTag tag : {GroupTag::Engel, GroupTag::Cartan}) {
        const std::string g = group_name(tag);

        double unit_trig = 0, unit_cubic = 0, hom = 0;
        for (int n = 0; n < 100; ++n) {
            const DualPoint d = random_dual(tag, rng);
            const GroupPoint a = random_point(tag, rng, 0.5), b = random_point(tag, rng, 0.5);
            const double norm = l2_norm(psi);
            unit_trig = std::max(unit_trig, std::abs(l2_norm(rep_apply(d, a, psi, Interpolation::Trigonometric)) - norm));
            unit_cubic = std::max(unit_cubic, std::abs(l2_norm(rep_apply(d, a, psi)) - norm));
            const WaveFunction lhs = rep_apply(d, multiply(a, b), psi, Interpolation::Trigonometric);
            const WaveFunction rhs =
                rep_apply(d, a, rep_apply(d, b, psi, Interpolation::Trigonometric), Interpolation::Trigonometric);
            hom = std::max(hom, sup_diff(lhs, rhs));
        }
        r.expect(g + " unitarity (band-limited shift)", unit_trig <= 1e-10, "100 trials, max |norm change| " + sci(unit_trig));
        r.note(g + " unitarity (cubic shift)", "max |norm change| " + sci(unit_cubic));
        r.expect(g + " homomorphism", hom <= 1e-8, "100 random (g, h, d), sup error " + sci(hom));

        double worst_order = 1e300;
        std::string orders;
        for (int n = 0; n < 4; ++n) {
            const DualPoint d = random_dual(tag, rng);
            for (int i = 1; i <= 2; ++i) {
                const WaveFunction exact = drep(i, d, psi);
                double err[2];
                for (int k = 0; k < 2; ++k) {
                    const double eps = k == 0 ? 2e-3 : 1e-3;
                    AlgebraVector step{tag, {}};
                    step.a[i - 1] = eps;
                    const WaveFunction moved = rep_apply(d, exp_coords(step), psi, Interpolation::Trigonometric);
                    err[k] = sup_diff(combine(moved, psi, 1.0 / eps, -1.0 / eps), exact);
                }
                const double order = std::log2(err[0] / err[1]);
                worst_order = std::min(worst_order, order);
                orders += fmt::format("{:.3f} ", order);
            }
        }
        r.expect(g + " infinitesimal representation (observed order >= 1)", worst_order >= 0.99,
                 "orders " + orders);

        double worst_ratio = 0;
        for (int n = 0; n < 4; ++n) {
            const DualPoint d = random_dual(tag, rng);
            const WaveFunction test = gaussian(grid, 0.8, 0.5);
            const double norm = l2_norm(test);
            const double gap = l2_norm(combine(gft_laplacian(d, test), sum_of_squares(d, test), 1.0, -1.0)) / norm;
            const ThetaGrid fine_grid{grid.L, 2 * grid.n - 1};
            const WaveFunction fine = gaussian(fine_grid, 0.8, 0.5);
            const double e1 = l2_norm(combine(restrict_to_coarse(sum_of_squares(d, fine), grid), sum_of_squares(d, test), 1.0, -1.0));
            const double e2 = l2_norm(combine(restrict_to_coarse(gft_laplacian(d, fine), grid), gft_laplacian(d, test), 1.0, -1.0));
            const double bound = std::max(e1, e2) / norm;
            worst_ratio = std::max(worst_ratio, gap / bound);
        }
        r.expect(g + " gft_laplacian equals dX1^2 + dX2^2", worst_ratio <= 10.0,
                 "worst gap / grid error estimate " + sci(worst_ratio));

        double map_err = 0;
        for (int n = 0; n < 2; ++n) {
            const DualPoint d = random_dual(tag, rng);
            const ThetaGrid g2{8.0, 2049};
            const WaveFunction start = gaussian(g2, std::sqrt(2.0), 0.0);
            const double t = 0.01;
            const double S = tag == GroupTag::Engel ? 1.0 : d.lambda * d.lambda + d.mu * d.mu;
            const double radius = 16.0 / (3.0 * g2.h() * g2.h() * S) + 1e4;
            const WaveFunction ref = rk4_evolve([&](const WaveFunction& f) { return gft_laplacian(d, f); }, start, t, radius);
            const QuarticParams qp = dual_to_quartic(d);
            const SpectralDecomposition dec = decompose(qp, g2, 400);
            const WaveFunction got = spectral_evolve(dec, start, qp.time_scale * t);
            map_err = std::max(map_err, sup_diff(ref, got) / sup_diff(ref, WaveFunction{g2, std::vector<cplx>(g2.n)}));
        }
        r.expect(g + " quartic parameters reproduce the gft_laplacian evolution", map_err <= 1e-6,
                 "t = 0.01, max error " + sci(map_err));
    }

    // With the constant term lambda mu / S in dX2 instead of lambda nu / S the operator identity breaks.
    {
        const DualPoint d{GroupTag::Cartan, 0.8, 0.6, 1.7};
        const double S = 1.0;
        WaveFunction variant = drep(2, d, psi);
        for (int k = 0; k < grid.n; ++k) variant.values[k] += 0.5 * I * d.lambda * (d.mu - d.nu) / S * psi.values[k];
        const WaveFunction sos = combine(drep(1, d, drep(1, d, psi)), drep(2, d, variant), 1.0, 1.0);
        const WaveFunction fixed = sum_of_squares(d, psi);
        const double bad = l2_norm(combine(gft_laplacian(d, psi), sos, 1.0, -1.0)) / l2_norm(psi);
        const double good = l2_norm(combine(gft_laplacian(d, psi), fixed, 1.0, -1.0)) / l2_norm(psi);
        r.expect("g5 dX2 with lambda mu in place of lambda nu fails the operator identity", bad > 1e3 * good,
                 fmt::format("variant gap {}, adopted gap {}", sci(bad), sci(good)));
    }

    const DualPoint de{GroupTag::Engel, 1.3, -0.4};
    r.expect("identity acts trivially", sup_diff(rep_apply(de, identity(GroupTag::Engel), psi), psi) == 0.0);
    {
        const double x1 = 0.37;
        const WaveFunction moved = rep_apply(de, make_point(GroupTag::Engel, {x1, 0, 0, 0}), psi, Interpolation::Trigonometric);
        const WaveFunction want = sample(grid, [&](double th) { return std::exp(-(th + x1) * (th + x1) / 2.0 + I * 0.3 * (th + x1)); });
        r.expect("g4 (x1,0,0,0) is a translation", sup_diff(moved, want) <= 1e-10, "sup error " + sci(sup_diff(moved, want)));
    }
    {
        const DualPoint d{GroupTag::Cartan, 1.0, 1.0, 2.0};
        const std::array<double, 5> x{1, 1, 1, 1, 1};
        const double got = phase_K5(d, GroupPoint{GroupTag::Cartan, x}, 0.5);
        const double want = phase_oracle(1, 1, 2, x, 0.5);
        r.expect("phase_K5 reference value", std::abs(got - want) <= 1e-14, fmt::format("{} vs {}", got, want));
        const DualPoint d2{GroupTag::Cartan, 0.7, -0.2, 0.4};
        r.expect("phase_K5 at (0,0,0,x4,0) is lambda x4",
                 std::abs(phase_K5(d2, make_point(GroupTag::Cartan, {0, 0, 0, 1.5, 0}), 0.9) - 0.7 * 1.5) <= 1e-15);
        r.expect("phase_K5 at the identity is 0", phase_K5(d2, identity(GroupTag::Cartan), 0.9) == 0.0);
        double worst = 0;
        for (int n = 0; n < 1000; ++n) {
            const DualPoint dd = random_dual(GroupTag::Cartan, rng);
            const GroupPoint xx = random_point(GroupTag::Cartan, rng);
            const double th = uniform(rng, -3, 3);
            worst = std::max(worst, std::abs(phase_K5(dd, xx, th) - phase_oracle(dd.lambda, dd.mu, dd.nu, xx.x, th)));
        }
        r.expect("phase_K5 matches the independent evaluation", worst <= 1e-12, "1000 trials, max error " + sci(worst));
    }
    {
        const WaveFunction d1 = drep(1, de, psi);
        const WaveFunction want = sample(grid, [](double th) { return (-th + I * 0.3) * std::exp(-th * th / 2.0 + I * 0.3 * th); });
        r.expect("g4 dX1 differentiates", sup_diff(d1, want) <= 1e-6, "sup error " + sci(sup_diff(d1, want)));
        const DualPoint dc{GroupTag::Cartan, 1.0, 0.0, 0.0};
        const WaveFunction x2 = drep(2, dc, psi);
        const WaveFunction want2 = sample(grid, [](double th) { return 0.5 * I * th * th * std::exp(-th * th / 2.0 + I * 0.3 * th); });
        r.expect("g5 dX2 at lambda=1, mu=nu=0", sup_diff(x2, want2) <= 1e-14);
        const auto d2 = second_derivative(psi.values, grid.h());
        double e4 = 0, e5 = 0;
        const WaveFunction l4 = gft_laplacian(DualPoint{GroupTag::Engel, 2.0, 0.0}, psi);
        const WaveFunction l5 = gft_laplacian(dc, psi);
        for (int k = 0; k < grid.n; ++k) {
            const double th4 = std::pow(grid.theta(k), 4);
            e4 = std::max(e4, std::abs(l4.values[k] - (d2[k] - th4 * psi.values[k])));
            e5 = std::max(e5, std::abs(l5.values[k] - (d2[k] - 0.25 * th4 * psi.values[k])));
        }
        r.expect("g4 lambda=2, mu=0 gives d^2 - theta^4", e4 <= 1e-12);
        r.expect("g5 lambda=1, mu=nu=0 gives d^2 - theta^4/4", e5 <= 1e-12);
        const QuarticParams q4 = dual_to_quartic(DualPoint{GroupTag::Engel, 2.0, 0.0});
        const QuarticParams q5 = dual_to_quartic(dc);
        r.expect("dual_to_quartic examples", q4.alpha == 1.0 && q4.beta == 0.0 && q4.time_scale == 1.0 &&
                                                  q5.alpha == 0.5 && q5.beta == 0.0 && q5.time_scale == 1.0);
    }
    return r;
}

}  // namespace nilheat::checks
