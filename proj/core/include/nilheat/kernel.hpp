#pragma once

#include <vector>

#include "nilheat/group.hpp"
#include "nilheat/representation.hpp"

namespace nilheat {

// The dual integral is taken in scaled variables. Every node uses the quartic operator with
// alpha = 1 and shift b:
//   Engel:  lambda = +-2 r^3, mu = -4 r^4 b                 (d lambda d mu = 24 r^6 dr db)
//   Cartan: lambda + i mu = 2 r^3 e^{i phi}, nu = 4 r^4 b   (d lambda d mu d nu = 48 r^9 dr dphi db)
// The b axis is cut to [b_min, b_max]. Below b_min the wells are harmonic and that region is added
// in closed form; r runs over [0, R(b)] with t R^2 E0(b) = r_cut.
struct QuadratureConfig {
    double b_min = -80.0;
    double b_max = 12.0;
    int b_nodes = 12;    // Gauss-Legendre nodes per b panel
    int r_panels = 4;    // minimum number of radial panels
    int r_nodes = 16;    // Gauss-Legendre nodes per radial panel
    double r_cut = 32.0;
    int phi_nodes = 16;  // minimum trapezoid nodes in phi (Cartan)
    double oscillations_per_panel = 2.5;
    double eig_rel_tol = 2e-5;  // relative accuracy target for the low eigenvalues
    double mode_tol = 1e-4;     // relative trace weight left in discarded modes
    double tail_tol = 1e-3;     // tail_estimate / |value| above this sets tail_warning
    bool full_domain = false;   // Engel: integrate lambda < 0 explicitly instead of doubling Re
    bool embedded_estimate = true;
};

QuadratureConfig default_quadrature(GroupTag tag);
// Throws ContractViolation unless counts are positive, b_min < 0 < b_max and tolerances are positive.
void validate(const QuadratureConfig& cfg);

// Doubles every node count.
QuadratureConfig refined(const QuadratureConfig& cfg);

struct KernelResult {
    double value = 0.0;
    double imag_residual = 0.0;  // |Im| of the assembled sum (0 by construction for the Engel half domain)
    double tail_estimate = 0.0;  // truncation bounds plus the embedded coarse-rule difference
    long long node_count = 0;
    double wall_ms = 0.0;
    bool tail_warning = false;
};

KernelResult heat_kernel_g4(const GroupPoint& x, double t, const QuadratureConfig& cfg = default_quadrature(GroupTag::Engel));
KernelResult heat_kernel_g5(const GroupPoint& x, double t, const QuadratureConfig& cfg = default_quadrature(GroupTag::Cartan));
KernelResult heat_kernel(const GroupPoint& x, double t, const QuadratureConfig& cfg);

// e^{i K(theta)} Psi_{t'}(theta + shift, theta) at one dual point, t' = time_scale * t.
cplx integrand(const DualPoint& d, double theta, const GroupPoint& x, double t);

// Engel kernel on the log-coordinate grid (x1, x2, a3[j], a4[k]); row j, column k.
std::vector<double> engel_log_slab(double x1, double x2, const std::vector<double>& a3, const std::vector<double>& a4,
                                   double t, const QuadratureConfig& cfg = default_quadrature(GroupTag::Engel));

}  // namespace nilheat
