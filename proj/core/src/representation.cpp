#include "nilheat/representation.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace nilheat {

namespace {

constexpr cplx I{0.0, 1.0};

std::mutex fftw_planner_mutex;

void require_grid(const WaveFunction& psi) {
    if (psi.grid.n < 2 || !(psi.grid.L > 0.0) || static_cast<int>(psi.values.size()) != psi.grid.n)
        throw ContractViolation("wave function: inconsistent grid");
}

double sq(double v) { return v * v; }

std::vector<cplx> shift_cubic(const WaveFunction& psi, double s) {
    const ThetaGrid& g = psi.grid;
    const double h = g.h();
    const int n = g.n;
    std::vector<cplx> out(n);
    auto at = [&](int k) { return (k < 0 || k >= n) ? cplx{} : psi.values[k]; };
    for (int i = 0; i < n; ++i) {
        const double pos = (g.theta(i) + s + g.L) / h;
        const double fl = std::floor(pos);
        const int k = static_cast<int>(fl);
        const double u = pos - fl;
        if (k < -2 || k > n) continue;
        // Four-point Lagrange interpolation on nodes k-1, k, k+1, k+2.
        const double wm = -u * (u - 1.0) * (u - 2.0) / 6.0;
        const double w0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        const double w1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        const double w2 = (u + 1.0) * u * (u - 1.0) / 6.0;
        out[i] = wm * at(k - 1) + w0 * at(k) + w1 * at(k + 1) + w2 * at(k + 2);
    }
    return out;
}

// Fourier shift theorem on the periodic extension of the samples.
std::vector<cplx> shift_trigonometric(const WaveFunction& psi, double s) {
    const int n = psi.grid.n;
    const double h = psi.grid.h();
    std::vector<cplx> buf(psi.values);
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fwd = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    const double dk = 2.0 * std::numbers::pi / (n * h);
    for (int j = 0; j < n; ++j) {
        const int m = (j <= n / 2) ? j : j - n;
        buf[j] *= std::exp(I * (m * dk * s)) / static_cast<double>(n);
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    return buf;
}

}  // namespace

void validate(const DualPoint& d) {
    if (!std::isfinite(d.lambda) || !std::isfinite(d.mu) || !std::isfinite(d.nu))
        throw ContractViolation("dual point: non-finite parameter");
    if (d.tag == GroupTag::Engel && d.lambda == 0.0) throw ContractViolation("dual point: Engel requires lambda != 0");
    if (d.tag == GroupTag::Cartan && d.lambda == 0.0 && d.mu == 0.0)
        throw ContractViolation("dual point: Cartan requires lambda^2 + mu^2 != 0");
}

WaveFunction sample(const ThetaGrid& grid, const std::function<cplx(double)>& f) {
    WaveFunction w{grid, std::vector<cplx>(grid.n)};
    for (int i = 0; i < grid.n; ++i) w.values[i] = f(grid.theta(i));
    return w;
}

double l2_norm(const WaveFunction& psi) {
    double s = 0.0;
    for (const cplx& v : psi.values) s += std::norm(v);
    return std::sqrt(s * psi.grid.h());
}

cplx inner(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid == b.grid)) throw ContractViolation("inner: grids differ");
    cplx s{};
    for (int i = 0; i < a.grid.n; ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid.h();
}

double rep_shift(const DualPoint& d, const GroupPoint& g) {
    if (d.tag != g.tag) throw ContractViolation("representation: group tag mismatch");
    if (d.tag == GroupTag::Engel) return g.x[0];
    return (d.lambda * g.x[0] + d.mu * g.x[1]) / (sq(d.lambda) + sq(d.mu));
}

double phase_K5(const DualPoint& d, const GroupPoint& g, double theta) {
    if (d.tag != GroupTag::Cartan || g.tag != GroupTag::Cartan) throw ContractViolation("phase_K5: Cartan tag required");
    validate(d);
    const double l = d.lambda, m = d.mu, v = d.nu;
    const auto& x = g.x;
    const double S = l * l + m * m;
    const double w = m * x[0] - l * x[1];
    const double cubic = l * l * x[0] * x[0] * x[0] + 3.0 * l * m * x[0] * x[0] * x[1] + 3.0 * m * m * x[0] * x[1] * x[1] -
                         l * m * x[1] * x[1] * x[1];
    const double c0 = -v * w / (2.0 * S) + l * x[3] + m * x[4] - m * cubic / (6.0 * S);
    const double c1 = -(S * x[2] + m * m * x[0] * x[1] + 0.5 * l * m * (x[0] * x[0] - x[1] * x[1]));
    const double c2 = -0.5 * S * w;
    return c0 + theta * (c1 + theta * c2);
}

double rep_phase(const DualPoint& d, const GroupPoint& g, double theta) {
    if (d.tag != g.tag) throw ContractViolation("representation: group tag mismatch");
    if (d.tag == GroupTag::Cartan) return phase_K5(d, g, theta);
    validate(d);
    const double l = d.lambda, m = d.mu;
    const auto& x = g.x;
    return -m * x[1] / (2.0 * l) + l * x[3] - l * x[2] * theta + 0.5 * l * x[1] * theta * theta;
}

WaveFunction rep_apply(const DualPoint& d, const GroupPoint& g, const WaveFunction& psi, Interpolation interp) {
    require_grid(psi);
    validate(d);
    const double s = rep_shift(d, g);
    if (std::abs(s) > 0.5 * psi.grid.L) throw DomainError("rep_apply: shift exceeds the grid margin L/2");
    WaveFunction out{psi.grid, {}};
    if (s == 0.0)
        out.values = psi.values;
    else
        out.values = interp == Interpolation::Cubic ? shift_cubic(psi, s) : shift_trigonometric(psi, s);
    for (int i = 0; i < psi.grid.n; ++i) out.values[i] *= std::exp(I * rep_phase(d, g, psi.grid.theta(i)));
    return out;
}

std::vector<cplx> derivative(const std::vector<cplx>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 5) throw ContractViolation("derivative: at least 5 samples required");
    std::vector<cplx> out(n);
    const double c = 1.0 / (12.0 * h);
    for (int i = 2; i < n - 2; ++i) out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    out[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
    out[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    return out;
}

std::vector<cplx> second_derivative(const std::vector<cplx>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 6) throw ContractViolation("second_derivative: at least 6 samples required");
    std::vector<cplx> out(n);
    const double c = 1.0 / (12.0 * h * h);
    for (int i = 2; i < n - 2; ++i) out[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
    out[0] = c * (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]);
    out[1] = c * (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]);
    out[n - 1] = c * (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] + 61.0 * f[n - 5] - 10.0 * f[n - 6]);
    out[n - 2] = c * (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] - 6.0 * f[n - 5] + f[n - 6]);
    return out;
}

WaveFunction drep(int i, const DualPoint& d, const WaveFunction& psi) {
    if (i != 1 && i != 2) throw ContractViolation("drep: index must be 1 or 2");
    require_grid(psi);
    validate(d);
    const ThetaGrid& g = psi.grid;
    const std::vector<cplx> dpsi = derivative(psi.values, g.h());
    WaveFunction out{g, std::vector<cplx>(g.n)};
    const double l = d.lambda, m = d.mu, v = d.nu;
    for (int k = 0; k < g.n; ++k) {
        const double th = g.theta(k);
        if (d.tag == GroupTag::Engel) {
            out.values[k] = (i == 1) ? dpsi[k] : I * (-m / (2.0 * l) + 0.5 * l * th * th) * psi.values[k];
        } else {
            const double S = l * l + m * m;
            if (i == 1)
                out.values[k] = (l / S) * dpsi[k] - 0.5 * I * (m * v / S + m * S * th * th) * psi.values[k];
            else
                out.values[k] = (m / S) * dpsi[k] + 0.5 * I * (l * v / S + l * S * th * th) * psi.values[k];
        }
    }
    return out;
}

WaveFunction gft_laplacian(const DualPoint& d, const WaveFunction& psi) {
    require_grid(psi);
    validate(d);
    const ThetaGrid& g = psi.grid;
    const std::vector<cplx> d2 = second_derivative(psi.values, g.h());
    WaveFunction out{g, std::vector<cplx>(g.n)};
    const double l = d.lambda, m = d.mu, v = d.nu;
    for (int k = 0; k < g.n; ++k) {
        const double th = g.theta(k);
        if (d.tag == GroupTag::Engel) {
            out.values[k] = d2[k] - 0.25 * sq(l * th * th - m / l) * psi.values[k];
        } else {
            const double S = l * l + m * m;
            out.values[k] = d2[k] / S - sq(v + S * S * th * th) / (4.0 * S) * psi.values[k];
        }
    }
    return out;
}

QuarticParams dual_to_quartic(const DualPoint& d) {
    validate(d);
    if (d.tag == GroupTag::Engel) return {d.lambda / 2.0, -d.mu / (2.0 * d.lambda), 1.0};
    const double S = d.lambda * d.lambda + d.mu * d.mu;
    return {S * S / 2.0, d.nu / 2.0, 1.0 / S};
}

}  // namespace nilheat
