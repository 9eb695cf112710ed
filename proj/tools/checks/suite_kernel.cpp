#include "checks.hpp"
#include "common.hpp"

#include <numbers>

#include "nilheat/kernel.hpp"

namespace nilheat::checks {

namespace {

constexpr double kT = 0.25;

std::vector<GroupPoint> engel_probes() {
    Rng rng(4401);
    std::vector<GroupPoint> out;
    for (int i = 0; i < 5; ++i)
        out.push_back(make_point(GroupTag::Engel, {uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.2, 0.2),
                                                   uniform(rng, -0.05, 0.05)}));
    return out;
}

std::string value_line(const KernelResult& k) {
    return fmt::format("{:.8g} (tail {}, {} nodes, {:.1f} s)", k.value, sci(k.tail_estimate), k.node_count, k.wall_ms / 1000);
}

// Marginal of the Engel kernel over (x3, x4) at fixed (x1, x2), trapezoid over a log-coordinate box.
double engel_marginal(double x1, double x2) {
    const int n3 = 41, n4 = 41;
    const double A3 = 1.0, A4 = 0.4;
    std::vector<double> a3(n3), a4(n4);
    for (int i = 0; i < n3; ++i) a3[i] = -A3 + 2 * A3 * i / (n3 - 1);
    for (int i = 0; i < n4; ++i) a4[i] = -A4 + 2 * A4 * i / (n4 - 1);
    const std::vector<double> v = engel_log_slab(x1, x2, a3, a4, kT);
    double sum = 0;
    for (int i = 0; i < n3; ++i)
        for (int k = 0; k < n4; ++k) sum += (i == 0 || i == n3 - 1 ? 0.5 : 1.0) * (k == 0 || k == n4 - 1 ? 0.5 : 1.0) * v[i * n4 + k];
    return sum * (a3[1] - a3[0]) * (a4[1] - a4[0]);
}

}  // namespace

SuiteResult engel_kernel_suite() {
    SuiteResult r{"kernel-g4"};
    const GroupTag tag = GroupTag::Engel;
    const GroupPoint e = identity(tag);
    const QuadratureConfig cfg = default_quadrature(tag);

    const KernelResult pe = heat_kernel_g4(e, kT, cfg);
    for (double t : {0.25, 0.5, 1.0}) {
        const KernelResult k = t == kT ? pe : heat_kernel_g4(e, t, cfg);
        r.expect(fmt::format("p_t(e) > 0 at t = {}", t), k.value > 0.0, value_line(k));
    }

    QuadratureConfig full = cfg;
    full.full_domain = true;
    const auto probes = engel_probes();
    for (const GroupPoint& x : {e, probes[0]}) {
        const KernelResult k = heat_kernel_g4(x, kT, full);
        r.expect("imaginary residual at " + to_string(x), k.imag_residual <= 1e-3 * pe.value,
                 fmt::format("|Im| = {} (full domain value {:.8g})", sci(k.imag_residual), k.value));
    }

    for (const GroupPoint& x : probes) {
        const KernelResult p = heat_kernel_g4(x, kT, cfg);
        const GroupPoint s1 = make_point(tag, {-x[0], x[1], -x[2], x[3]});
        const GroupPoint s2 = make_point(tag, {x[0], -x[1], -x[2], -x[3]});
        struct Pair {
            const char* name;
            GroupPoint y;
        };
        for (const Pair& pr : {Pair{"inverse", inverse(x)}, Pair{"l1 -> -l1", s1}, Pair{"l2 -> -l2", s2}}) {
            const KernelResult q = heat_kernel_g4(pr.y, kT, cfg);
            const double tol = p.tail_estimate + q.tail_estimate;
            r.expect(fmt::format("{} symmetry at {}", pr.name, to_string(x)), std::abs(p.value - q.value) <= tol,
                     fmt::format("{:.8g} vs {:.8g}, difference {}, tolerance {}", p.value, q.value, sci(std::abs(p.value - q.value)),
                                 sci(tol)));
        }
    }

    for (const GroupPoint& x : {e, probes[1]}) {
        const KernelResult a = heat_kernel_g4(x, kT, cfg);
        const KernelResult b = heat_kernel_g4(x, kT, refined(cfg));
        r.expect("refinement at " + to_string(x), std::abs(a.value - b.value) <= a.tail_estimate,
                 fmt::format("{:.10g} -> {:.10g}, tail {}", a.value, b.value, sci(a.tail_estimate)));
    }

    {
        Rng rng(99);
        double cs = 0, conj = 0;
        bool positive = true;
        for (int n = 0; n < 200; ++n) {
            const DualPoint d{tag, uniform(rng, 0.2, 3.0), uniform(rng, -3.0, 3.0)};
            const GroupPoint x = random_point(tag, rng, 0.5);
            const double th = uniform(rng, -1.5, 1.5);
            const double u = rep_shift(d, x);
            const cplx v = integrand(d, th, x, kT);
            const cplx at_e = integrand(d, th, e, kT);
            positive = positive && at_e.imag() == 0.0 && at_e.real() > 0.0;
            const double bound = std::sqrt(integrand(d, th + u, e, kT).real() * at_e.real());
            cs = std::max(cs, std::abs(v) - bound);
            const cplx mirrored = integrand(DualPoint{tag, -d.lambda, d.mu}, th, x, kT);
            conj = std::max(conj, std::abs(mirrored - std::conj(v)));
        }
        r.expect("integrand at the identity is real and positive", positive);
        r.expect("integrand Cauchy-Schwarz bound", cs <= 1e-12, "max excess " + sci(cs));
        r.expect("integrand conjugation pairing", conj <= 1e-10, "max error " + sci(conj));
    }

    {
        // (x3, x4)-marginals on the midpoints of a 0.5 grid over the positive quadrant of [-2, 2]^2;
        // the two sign automorphisms make the other quadrants equal.
        const double h = 0.5;
        double mass = 0, worst = 0;
        std::string details;
        const std::vector<std::pair<double, double>> checked = {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75},
                                                                {1.25, 0.25}, {1.25, 1.25}, {1.75, 0.75}};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double x1 = h * (i + 0.5), x2 = h * (j + 0.5);
                const double m = engel_marginal(x1, x2);
                mass += 4 * h * h * m;
                if (std::find(checked.begin(), checked.end(), std::make_pair(x1, x2)) != checked.end()) {
                    const double gauss = std::exp(-(x1 * x1 + x2 * x2) / (4 * kT)) / (4 * std::numbers::pi * kT);
                    const double rel = m / gauss - 1.0;
                    worst = std::max(worst, std::abs(rel));
                    details += fmt::format("({},{}): {:+.4f}  ", x1, x2, rel);
                }
            }
        r.expect("marginal is planar Brownian motion", worst <= 0.05, details);
        r.expect("total mass", mass >= 0.96 && mass <= 1.02, fmt::format("{:.5f}", mass));
    }
    return r;
}

SuiteResult cartan_kernel_suite() {
    SuiteResult r{"kernel-g5"};
    const GroupTag tag = GroupTag::Cartan;
    const GroupPoint e = identity(tag);
    const QuadratureConfig cfg = default_quadrature(tag);

    const KernelResult pe = heat_kernel_g5(e, kT, cfg);
    for (double t : {0.25, 0.5}) {
        const KernelResult k = t == kT ? pe : heat_kernel_g5(e, t, cfg);
        r.expect(fmt::format("p_t(e) > 0 at t = {}", t), k.value > 0.0, value_line(k));
    }

    const GroupPoint x = make_point(tag, {0.2, 0.1, 0.05, 0.01, 0.02});
    const GroupPoint y = rotate_cartan(x, std::numbers::pi / 2);
    const KernelResult px = heat_kernel_g5(x, kT, cfg);
    const KernelResult py = heat_kernel_g5(y, kT, cfg);
    const double tol = px.tail_estimate + py.tail_estimate;
    r.expect("rotation by pi/2: " + to_string(x) + " vs " + to_string(y), std::abs(px.value - py.value) <= tol,
             fmt::format("{:.8g} vs {:.8g}, difference {}, tolerance {}", px.value, py.value, sci(std::abs(px.value - py.value)),
                         sci(tol)));

    for (const KernelResult* k : {&pe, &px})
        r.expect("imaginary residual", k->imag_residual <= 1e-2 * pe.value,
                 fmt::format("|Im| = {} against p(e) = {:.6g}", sci(k->imag_residual), pe.value));

    for (const GroupPoint& p : {e, make_point(tag, {0, 0, 0.2, 0, 0})}) {
        const KernelResult a = p[2] == 0.0 ? pe : heat_kernel_g5(p, kT, cfg);
        const KernelResult b = heat_kernel_g5(p, kT, refined(cfg));
        r.expect("refinement at " + to_string(p), std::abs(a.value - b.value) <= a.tail_estimate,
                 fmt::format("{:.10g} -> {:.10g}, tail {} ({:.0f} s refined)", a.value, b.value, sci(a.tail_estimate),
                             b.wall_ms / 1000));
    }
    return r;
}

}  // namespace nilheat::checks
