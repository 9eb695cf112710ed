#include "nilheat/propagator.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace nilheat {

void validate(const ThetaGrid& grid) {
    if (grid.n < 16 || !(grid.L > 0.0) || !std::isfinite(grid.L)) throw ContractViolation("theta grid: need n >= 16 and L > 0");
}

Hamiltonian assemble_hamiltonian(const QuarticParams& p, const ThetaGrid& grid) {
    validate(grid);
    Hamiltonian H{p, grid, std::vector<double>(grid.n), std::vector<double>(grid.n - 1)};
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 0; i < grid.n; ++i) {
        const double th = grid.theta(i);
        const double v = p.alpha * th * th + p.beta;
        H.diag[i] = 2.0 * inv_h2 + v * v;
    }
    std::fill(H.off.begin(), H.off.end(), -inv_h2);
    return H;
}

SpectralDecomposition spectrum(const Hamiltonian& H, int k_max) {
    const int n = H.grid.n;
    if (k_max < 1 || k_max > n) throw ContractViolation("spectrum: need 1 <= k_max <= n");
    std::vector<double> d(H.diag), e(n);
    std::copy(H.off.begin(), H.off.end(), e.begin());
    std::vector<double> w(n), z(static_cast<std::size_t>(n) * k_max);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k_max));
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k_max, 0.0, &m,
                                           w.data(), z.data(), n, isuppz.data());
    if (info != 0 || m != k_max) throw std::runtime_error("spectrum: dstevr failed with info " + std::to_string(info));
    SpectralDecomposition dec{H.params, H.grid, std::vector<double>(w.begin(), w.begin() + k_max), std::move(z)};
    // Column-major n x k output is exactly "row j = mode j"; rescale to unit norm with weight h.
    const double scale = 1.0 / std::sqrt(H.grid.h());
    for (double& v : dec.modes) v *= scale;
    return dec;
}

SpectralDecomposition decompose(const QuarticParams& p, const ThetaGrid& grid, int k_max) {
    return spectrum(assemble_hamiltonian(p, grid), k_max);
}

namespace {

// Value of mode j at theta by four-point Lagrange interpolation (zero outside the walls).
double mode_at(const SpectralDecomposition& dec, int j, double theta) {
    const ThetaGrid& g = dec.grid;
    const double pos = (theta + g.L) / g.h();
    const double fl = std::floor(pos);
    const int k = static_cast<int>(fl);
    const double u = pos - fl;
    const double* f = dec.mode(j);
    auto at = [&](int i) { return (i < 0 || i >= g.n) ? 0.0 : f[i]; };
    if (u == 0.0) return at(k);
    const double wm = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double w1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double w2 = (u + 1.0) * u * (u - 1.0) / 6.0;
    return wm * at(k - 1) + w0 * at(k) + w1 * at(k + 1) + w2 * at(k + 2);
}

}  // namespace

PropagatorValue psi_eval(const SpectralDecomposition& dec, double tau, double theta, double theta_bar, double tail_tol) {
    if (!(tau > 0.0)) throw ContractViolation("psi_eval: tau must be positive");
    const double L = dec.grid.L;
    if (std::abs(theta) > L || std::abs(theta_bar) > L) throw DomainError("psi_eval: argument outside the grid");
    PropagatorValue r{tau, 0.0, false};
    const double ts = tau;
    const double e0 = dec.energies.front();
    for (int j = 0; j < dec.k(); ++j)
        r.value += std::exp(-(dec.energies[j] - e0) * ts) * (mode_at(dec, j, theta) * mode_at(dec, j, theta_bar));
    r.value *= std::exp(-e0 * ts);
    r.truncated = std::exp(-(dec.energies.back() - e0) * ts) > tail_tol;
    return r;
}

std::vector<double> psi_matrix(const SpectralDecomposition& dec, double tau) {
    if (!(tau > 0.0)) throw ContractViolation("psi_matrix: tau must be positive");
    const int n = dec.grid.n;
    const double ts = tau;
    std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < dec.k(); ++j) {
        const double w = std::exp(-dec.energies[j] * ts);
        const double* f = dec.mode(j);
        for (int a = 0; a < n; ++a) {
            const double fa = w * f[a];
            double* row = out.data() + static_cast<std::size_t>(a) * n;
            for (int b = 0; b < n; ++b) row[b] += fa * f[b];
        }
    }
    return out;
}

double well_frequency(const QuarticParams& p) {
    const double a = std::abs(p.alpha);
    const double b = p.alpha < 0 ? -p.beta : p.beta;
    if (a == 0.0) return 1.0;
    const double quartic = std::cbrt(a * a);
    if (b < 0.0) return std::max(quartic, 2.0 * std::sqrt(-a * b));
    return std::max(quartic, std::sqrt(2.0 * a * b));
}

ThetaGrid default_grid(const QuarticParams& p, double h_target) {
    const double a = std::abs(p.alpha);
    const double b = p.alpha < 0 ? -p.beta : p.beta;
    const double theta0 = (a > 0.0 && b < 0.0) ? std::sqrt(-b / a) : 0.0;
    const double L = std::max(8.0, 3.0 * theta0 + 8.0 / std::sqrt(well_frequency(p)));
    const int n = std::max(16, static_cast<int>(std::ceil(2.0 * L / h_target)) + 1);
    return {L, n};
}

ThetaGrid adapted_grid(double b, double rel_tol) {
    const double omega = well_frequency({1.0, b, 1.0});
    const double theta0 = b < 0.0 ? std::sqrt(-b) : 0.0;
    const double L = std::max(8.0, theta0 + 12.0 / std::sqrt(omega));
    // Second-order differences shift E by about h^2 E^2 / 12; relative to E ~ omega this is h^2 omega / 12.
    const double h = std::min(0.05, std::sqrt(12.0 * rel_tol / omega));
    const int n = static_cast<int>(std::ceil(2.0 * L / h)) + 1;
    return {L, n};
}

double ground_energy(const QuarticParams& p) {
    const double a = std::abs(p.alpha);
    const double b = p.alpha < 0 ? -p.beta : p.beta;
    // Without the quartic term the operator is -d^2 + b^2, whose spectrum on the line starts at b^2.
    if (a == 0.0) return b * b;
    // E(alpha, beta) = alpha^{2/3} E(1, beta / alpha^{1/3}).
    const double c = std::cbrt(a);
    const double bb = b / c;
    return c * c * decompose({1.0, bb, 1.0}, adapted_grid(bb, 2e-6), 1).energies.front();
}

std::shared_ptr<const SpectralDecomposition> DecompositionCache::get(const QuarticParams& p, const ThetaGrid& grid,
                                                                      int k_max) {
    QuarticParams q = p;
    if (q.alpha < 0.0 || (q.alpha == 0.0 && q.beta < 0.0)) {
        q.alpha = -q.alpha;
        q.beta = -q.beta;
    }
    const Key key{q.alpha, q.beta, grid.L, grid.n, k_max};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    auto dec = std::make_shared<const SpectralDecomposition>(decompose(q, grid, k_max));
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.emplace(key, std::move(dec)).first->second;
}

std::size_t DecompositionCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

}  // namespace nilheat
