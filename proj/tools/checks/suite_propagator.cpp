#include "checks.hpp"
#include "common.hpp"

#include <numbers>

#include "nilheat/propagator.hpp"

namespace nilheat::checks {

namespace {

constexpr double kQuarticE0 = 1.0604;

double psi(const SpectralDecomposition& dec, double tau, double a, double b) { return psi_eval(dec, tau, a, b).value; }

// Richardson extrapolation in h^2 from two grids.
double extrapolate(double e1, double h1, double e2, double h2) { return e2 + (e2 - e1) * h2 * h2 / (h1 * h1 - h2 * h2); }

}  // namespace

SuiteResult propagator_suite() {
    SuiteResult r{"propagator"};
    const double pi = std::numbers::pi;

    {
        const double b = 0.7;
        const SpectralDecomposition dec = decompose({0.0, b, 1.0}, {8.0, 32769}, 300);
        const double pairs[][2] = {{0, 0}, {1, -0.5}, {3.875, 3.5}, {-2, -2.625}, {0.25, 1.125}, {-4, -3.75}};
        double worst = 0;
        for (double tau : {0.05, 0.1, 0.25, 0.5, 1.0}) {
            const double peak = std::exp(-b * b * tau) / std::sqrt(4 * pi * tau);
            for (const auto& p : pairs) {
                const double want = peak * std::exp(-(p[0] - p[1]) * (p[0] - p[1]) / (4 * tau));
                worst = std::max(worst, std::abs(psi(dec, tau, p[0], p[1]) - want) / peak);
            }
        }
        r.expect("constant potential closed form", worst <= 1e-6,
                 "L = 8, n = 32769, tau in [0.05, 1], error relative to the peak " + sci(worst));
    }

    {
        double e[3], h[3];
        const int ns[] = {1024, 2048, 4096};
        for (int i = 0; i < 3; ++i) {
            const ThetaGrid g{8.0, ns[i]};
            e[i] = decompose({1.0, 0.0, 1.0}, g, 1).energies[0];
            h[i] = g.h();
        }
        const double oracle = extrapolate(e[1], h[1], e[2], h[2]);
        const double check = extrapolate(e[0], h[0], e[1], h[1]);
        r.expect("pure quartic E0 on L = 8, n = 2048", std::abs(e[1] - oracle) <= 1e-3 && std::abs(oracle - kQuarticE0) <= 1e-3,
                 fmt::format("E0 = {:.7f}, Richardson oracle {:.7f} (coarser pair {:.7f})", e[1], oracle, check));
        const double ge = ground_energy({1.0, 0.0, 1.0});
        r.expect("ground_energy pure quartic", std::abs(ge - kQuarticE0) <= 1e-3, fmt::format("{:.7f}", ge));
        const double gc = ground_energy({0.0, 1.5, 1.0});
        r.expect("ground_energy constant potential", gc == 2.25, fmt::format("{:.7f}", gc));
        // On a grid the shift by b^2 is exact and the rest is the discrete Dirichlet box energy.
        const ThetaGrid box{8.0, 2049};
        const double s1 = std::sin(pi / (2.0 * (box.n + 1)));
        const double discrete = 4.0 / (box.h() * box.h()) * s1 * s1;
        const double eb = decompose({0.0, 1.5, 1.0}, box, 1).energies[0];
        r.expect("constant potential spectrum shifted by b^2", std::abs(eb - 2.25 - discrete) <= 1e-10,
                 fmt::format("E0 - b^2 = {:.10f}, discrete box energy {:.10f}", eb - 2.25, discrete));
        const double gw = ground_energy({1.0, -4.0, 1.0});
        r.expect("ground_energy double well near 2 sqrt(-alpha beta)", std::abs(gw - 4.0) <= 1.2, fmt::format("{:.5f}", gw));
        bool mono = true;
        double prev = -1;
        for (double b : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const double v = ground_energy({1.0, b, 1.0});
            mono = mono && v >= prev;
            prev = v;
        }
        r.expect("ground_energy nondecreasing in beta >= 0", mono);
    }

    {
        const ThetaGrid g{8.0, 1024};
        const SpectralDecomposition dec = decompose({1.0, -2.0, 1.0}, g, 160);
        const int nodes[] = {300, 420, 511, 512, 600, 700};
        double worst = 0;
        for (double s : {0.1, 0.3, 0.5})
            for (double tau : {0.1, 0.3, 0.5})
                for (int a : nodes)
                    for (int b : nodes) {
                        double conv = 0;
                        for (int m = 0; m < g.n; ++m)
                            conv += g.h() * psi(dec, s, g.theta(a), g.theta(m)) * psi(dec, tau, g.theta(m), g.theta(b));
                        const double direct = psi(dec, s + tau, g.theta(a), g.theta(b));
                        const double scale = psi(dec, s + tau, g.theta(a), g.theta(a));
                        worst = std::max(worst, std::abs(conv - direct) / scale);
                    }
        r.expect("semigroup identity", worst <= 1e-4, "alpha = 1, beta = -2, max relative error " + sci(worst));
    }

    {
        // Grids are scaled with c so the discrete operators are exact multiples of each other.
        const QuarticParams p{1.0, -1.0, 1.0};
        const ThetaGrid g{8.0, 1201};
        const SpectralDecomposition base = decompose(p, g, 200);
        double worst = 0;
        for (double c : {0.5, 2.0}) {
            const SpectralDecomposition sc = decompose({p.alpha / (c * c * c), p.beta / c, 1.0}, {g.L * c, g.n}, 200);
            for (double tau : {0.1, 0.4})
                for (int a : {450, 600, 650})
                    for (int b : {550, 600, 680}) {
                        const double want = psi(base, tau, g.theta(a), g.theta(b));
                        const double got = c * psi(sc, c * c * tau, c * g.theta(a), c * g.theta(b));
                        worst = std::max(worst, std::abs(got - want) / std::abs(want));
                    }
        }
        r.expect("scaling law", worst <= 1e-5, "c in {0.5, 2}, max relative error " + sci(worst));
    }

    {
        const ThetaGrid g{8.0, 512};
        const SpectralDecomposition dw = decompose({1.0, -3.0, 1.0}, g, 200);
        const std::vector<double> m = psi_matrix(dw, 0.25);
        double mx = 0, mn = 0, parity = 0;
        for (int a = 0; a < g.n; ++a)
            for (int b = 0; b < g.n; ++b) {
                const double v = m[static_cast<std::size_t>(a) * g.n + b];
                mx = std::max(mx, v);
                mn = std::min(mn, v);
                parity = std::max(parity, std::abs(v - m[static_cast<std::size_t>(g.n - 1 - a) * g.n + (g.n - 1 - b)]));
            }
        r.expect("positivity", mn >= -1e-8 * mx, fmt::format("min {} max {}", sci(mn), sci(mx)));
        r.expect("parity", parity <= 1e-10 * mx, "max defect " + sci(parity / mx) + " of the peak");

        double sym = 0;
        for (double a : {-1.3, 0.2, 2.7})
            for (double b : {-0.4, 1.9})
                sym = std::max(sym, std::abs(psi(dw, 0.3, a, b) - psi(dw, 0.3, b, a)));
        r.expect("psi_eval symmetric", sym == 0.0);

        auto mass = [&](const SpectralDecomposition& dec, int b) {
            const std::vector<double> k = psi_matrix(dec, 0.25);
            double s = 0;
            for (int a = 0; a < g.n; ++a) s += g.h() * k[static_cast<std::size_t>(a) * g.n + b];
            return s;
        };
        double worst_mass = 0;
        for (int b = 0; b < g.n; b += 17) worst_mass = std::max(worst_mass, mass(dw, b));
        const SpectralDecomposition free = decompose({0.0, 0.0, 1.0}, g, 200);
        const double free_mass = mass(free, g.n / 2);
        r.expect("mass bound", worst_mass <= 1.0 + 1e-6, "max mass " + fmt::format("{:.9f}", worst_mass));
        r.expect("mass is 1 without potential", std::abs(free_mass - 1.0) <= 1e-6, fmt::format("{:.12f}", free_mass));
    }

    {
        const ThetaGrid g{8.0, 800};
        const SpectralDecomposition a = decompose({1.0, -2.0, 1.0}, g, 40);
        const SpectralDecomposition b = decompose({-1.0, 2.0, 1.0}, g, 40);
        double de = 0, dm = 0;
        for (int j = 0; j < 40; ++j) {
            de = std::max(de, std::abs(a.energies[j] - b.energies[j]));
            for (int i = 0; i < g.n; ++i) dm = std::max(dm, std::abs(std::abs(a.mode(j)[i]) - std::abs(b.mode(j)[i])));
        }
        r.expect("sign pair gives the same decomposition", de <= 1e-12 && dm <= 1e-12,
                 fmt::format("energies {}, modes {}", sci(de), sci(dm)));

        const Hamiltonian H = assemble_hamiltonian({1.0, 1.0, 1.0}, g);
        const SpectralDecomposition dec = spectrum(H, 40);
        double norm_h = 0;
        for (int i = 0; i < g.n; ++i) norm_h = std::max(norm_h, std::abs(H.diag[i]) + 2 * std::abs(H.off[0]));
        double ortho = 0, resid = 0, par = 0;
        for (int j = 0; j < 40; ++j) {
            const double* f = dec.mode(j);
            for (int k = 0; k <= j; ++k) {
                double s = 0;
                for (int i = 0; i < g.n; ++i) s += g.h() * f[i] * dec.mode(k)[i];
                ortho = std::max(ortho, std::abs(s - (j == k ? 1.0 : 0.0)));
            }
            double res = 0, nrm = 0;
            for (int i = 0; i < g.n; ++i) {
                double hv = H.diag[i] * f[i];
                if (i > 0) hv += H.off[i - 1] * f[i - 1];
                if (i + 1 < g.n) hv += H.off[i] * f[i + 1];
                res += (hv - dec.energies[j] * f[i]) * (hv - dec.energies[j] * f[i]);
                nrm += f[i] * f[i];
                par = std::max(par, std::abs(f[i] - (j % 2 ? -1.0 : 1.0) * f[g.n - 1 - i]));
            }
            resid = std::max(resid, std::sqrt(res / nrm));
        }
        bool sorted = std::is_sorted(dec.energies.begin(), dec.energies.end());
        r.expect("modes orthonormal", ortho <= 1e-10, sci(ortho));
        r.expect("eigen residual", resid <= 1e-9 * norm_h, fmt::format("{} (|H| = {})", sci(resid), sci(norm_h)));
        r.expect("modes alternate parity", par <= 1e-8, sci(par));
        r.expect("energies ascending", sorted);

        const SpectralDecomposition flat = decompose({0.0, 1.0, 1.0}, g, 5);
        const double Lw = g.L + g.h();
        double sine = 0;
        for (int j = 0; j < 5; ++j) {
            const double* f = flat.mode(j);
            double overlap = 0;
            for (int i = 0; i < g.n; ++i) overlap += f[i] * std::sin((j + 1) * pi * (g.theta(i) + Lw) / (2 * Lw));
            const double sign = overlap >= 0 ? 1.0 : -1.0;
            for (int i = 0; i < g.n; ++i)
                sine = std::max(sine, std::abs(f[i] - sign * std::sqrt(1.0 / Lw) * std::sin((j + 1) * pi * (g.theta(i) + Lw) / (2 * Lw))));
        }
        r.expect("constant potential modes are sines", sine <= 1e-8, sci(sine));
    }

    {
        const SpectralDecomposition c = decompose({1.0, -4.0, 1.0}, {8.0, 1024}, 2);
        const SpectralDecomposition f = decompose({1.0, -4.0, 1.0}, {8.0, 2047}, 2);
        const double gap = c.energies[1] - c.energies[0], gap_f = f.energies[1] - f.energies[0];
        r.expect("double well near-degenerate pair", gap < 0.05 * c.energies[0] && std::abs(gap - gap_f) <= 0.01 * gap_f,
                 fmt::format("E1 - E0 = {:.6g} (fine grid {:.6g}), E0 = {:.6g}", gap, gap_f, c.energies[0]));
    }

    {
        double v[3];
        int n = 301;
        for (double& x : v) {
            x = psi(decompose({1.0, -1.0, 1.0}, {8.0, n}, 120), 0.3, 0.5, -0.25);
            n = 2 * n - 1;
        }
        const double ratio = (v[0] - v[1]) / (v[1] - v[2]);
        r.expect("second-order grid convergence", ratio > 3.0 && ratio < 5.0, fmt::format("successive difference ratio {:.3f}", ratio));
    }

    {
        const SpectralDecomposition few = decompose({1.0, 0.0, 1.0}, {8.0, 256}, 4);
        r.expect("truncation flagged", psi_eval(few, 0.01, 0.0, 0.0).truncated && !psi_eval(few, 20.0, 0.0, 0.0).truncated);
        bool threw = false;
        try {
            psi_eval(few, 0.0, 0.0, 0.0);
        } catch (const ContractViolation&) {
            threw = true;
        }
        bool threw_k = false;
        try {
            decompose({1.0, 0.0, 1.0}, {8.0, 32}, 33);
        } catch (const ContractViolation&) {
            threw_k = true;
        }
        r.expect("contract violations", threw && threw_k);
    }
    return r;
}

}  // namespace nilheat::checks
