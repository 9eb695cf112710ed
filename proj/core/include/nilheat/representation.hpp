#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nilheat/grid.hpp"
#include "nilheat/group.hpp"

namespace nilheat {

using cplx = std::complex<double>;

// (lambda, mu) for Engel, (lambda, mu, nu) for Cartan.
struct DualPoint {
    GroupTag tag = GroupTag::Engel;
    double lambda = 1.0;
    double mu = 0.0;
    double nu = 0.0;
};

void validate(const DualPoint& d);

struct WaveFunction {
    ThetaGrid grid;
    std::vector<cplx> values;
};

// Potential (alpha theta^2 + beta)^2; physical time is multiplied by time_scale.
struct QuarticParams {
    double alpha = 1.0;
    double beta = 0.0;
    double time_scale = 1.0;
};

enum class Interpolation { Cubic, Trigonometric };

WaveFunction sample(const ThetaGrid& grid, const std::function<cplx(double)>& f);
double l2_norm(const WaveFunction& psi);
cplx inner(const WaveFunction& a, const WaveFunction& b);

// The representation acts as psi(theta) -> exp(i K(theta)) psi(theta + shift).
double rep_shift(const DualPoint& d, const GroupPoint& g);
double rep_phase(const DualPoint& d, const GroupPoint& g, double theta);

// Cartan phase K^{lambda,mu,nu}_x(theta).
double phase_K5(const DualPoint& d, const GroupPoint& x, double theta);

// Shifts larger than L/2 are rejected; samples falling off the grid read as zero.
WaveFunction rep_apply(const DualPoint& d, const GroupPoint& g, const WaveFunction& psi,
                       Interpolation interp = Interpolation::Cubic);

// Infinitesimal representation of X_1 or X_2 (i = 1, 2).
WaveFunction drep(int i, const DualPoint& d, const WaveFunction& psi);
WaveFunction gft_laplacian(const DualPoint& d, const WaveFunction& psi);
QuarticParams dual_to_quartic(const DualPoint& d);

// Fourth-order finite differences with one-sided closures at the grid ends.
std::vector<cplx> derivative(const std::vector<cplx>& f, double h);
std::vector<cplx> second_derivative(const std::vector<cplx>& f, double h);

}  // namespace nilheat
