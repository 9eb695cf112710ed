#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "nilheat/grid.hpp"
#include "nilheat/representation.hpp"

namespace nilheat {

// H = -d^2/dtheta^2 + (alpha theta^2 + beta)^2, Dirichlet walls at theta = +-(L + h).
struct Hamiltonian {
    QuarticParams params;
    ThetaGrid grid;
    std::vector<double> diag;
    std::vector<double> off;  // size n - 1
};

struct SpectralDecomposition {
    QuarticParams params;
    ThetaGrid grid;
    std::vector<double> energies;  // ascending
    std::vector<double> modes;     // row j holds mode j on the grid, normalised with weight h

    int k() const { return static_cast<int>(energies.size()); }
    const double* mode(int j) const { return modes.data() + static_cast<std::size_t>(j) * grid.n; }
};

struct PropagatorValue {
    double tau = 0.0;
    double value = 0.0;
    bool truncated = false;  // the last retained mode still carries weight above tolerance
};

void validate(const ThetaGrid& grid);

Hamiltonian assemble_hamiltonian(const QuarticParams& p, const ThetaGrid& grid);

// Lowest k_max eigenpairs (LAPACK dstevr).
SpectralDecomposition spectrum(const Hamiltonian& H, int k_max);

SpectralDecomposition decompose(const QuarticParams& p, const ThetaGrid& grid, int k_max);

// Psi_tau(theta, theta_bar) from the eigen-expansion; off-node points use cubic interpolation of the modes.
PropagatorValue psi_eval(const SpectralDecomposition& dec, double tau, double theta, double theta_bar,
                         double tail_tol = 1e-12);

// Psi_tau on all grid pairs, row i = theta_i, column j = theta_bar_j.
std::vector<double> psi_matrix(const SpectralDecomposition& dec, double tau);

// Grid half-width max(8, 3 theta0 + 8/sqrt(omega)) with spacing close to h_target.
ThetaGrid default_grid(const QuarticParams& p, double h_target = 0.02);

// Grid for alpha = 1, beta = b with spacing set by a relative eigenvalue accuracy target.
ThetaGrid adapted_grid(double b, double rel_tol);

// Harmonic frequency that sets the local length scale of the low modes (alpha = 1 units).
double well_frequency(const QuarticParams& p);

double ground_energy(const QuarticParams& p);

// Thread-safe cache keyed by (alpha, beta, L, n, k) after the sign normalisation alpha >= 0.
class DecompositionCache {
public:
    std::shared_ptr<const SpectralDecomposition> get(const QuarticParams& p, const ThetaGrid& grid, int k_max);
    std::size_t size() const;

private:
    using Key = std::tuple<double, double, double, int, int>;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const SpectralDecomposition>> entries_;
};

}  // namespace nilheat
