#include "nilheat/kernel.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "nilheat/parallel.hpp"
#include "nilheat/propagator.hpp"
#include "nilheat/quadrature.hpp"

namespace nilheat {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// Homogeneous dimension of the group: the radial weight is r^{Q-1}.
int homogeneous_dim(GroupTag tag) { return tag == GroupTag::Engel ? 7 : 10; }

// Plancherel constant times the Jacobian coefficient (24 r^6 or 48 r^9).
double node_prefactor(GroupTag tag) {
    return tag == GroupTag::Engel ? 24.0 / (16.0 * pi * pi * pi) : 48.0 / (32.0 * pi * pi * pi * pi);
}

DecompositionCache& cache() {
    static DecompositionCache c;
    return c;
}

struct BNode {
    double b = 0.0;
    double weight = 0.0;
    std::shared_ptr<const SpectralDecomposition> dec;
    int modes = 0;
    int lo = 0, hi = -1;      // index window where the kept modes are not negligible
    double trace = 0.0;       // sum over kept modes of E^{-Q/2}
    double remainder = 0.0;   // estimate of the same sum over discarded modes
    bool deepest = false;     // lies in the lowest b panel
};

// Remaining sum over modes n >= k of E_n^{-p}, using a local power law N(E) ~ E^gamma.
double mode_remainder(const std::vector<double>& E, int k, double p) {
    const double ek = E[k - 1];
    const double eh = E[k / 2 - 1];
    double gamma = (ek > eh) ? std::log(2.0) / std::log(ek / eh) : 1.0;
    gamma = std::clamp(gamma, 0.75, 1.0);
    return k * gamma * std::pow(ek, -p) / (p - gamma);
}

BNode prepare_b(double b, double weight, const QuadratureConfig& cfg, int Q) {
    const ThetaGrid grid = adapted_grid(b, cfg.eig_rel_tol);
    const double p = 0.5 * Q;
    int k = std::min(24, grid.n / 2);
    std::shared_ptr<const SpectralDecomposition> dec;
    int keep = k;
    while (true) {
        dec = cache().get({1.0, b, 1.0}, grid, k);
        const auto& E = dec->energies;
        double total = 0.0;
        for (double e : E) total += std::pow(e, -p);
        keep = -1;
        for (int kk = 8; kk <= k; ++kk)
            if (mode_remainder(E, kk, p) <= cfg.mode_tol * total) {
                keep = kk;
                break;
            }
        if (keep > 0 || k >= grid.n / 2) {
            if (keep < 0) keep = k;
            break;
        }
        // Extrapolate E_n ~ E_k (n/k)^{1/gamma} to predict how many modes the tolerance needs.
        const double ek = E[k - 1];
        const double gamma = std::clamp(std::log(2.0) / std::log(ek / E[k / 2 - 1]), 0.75, 1.0);
        int need = k;
        while (need < grid.n / 2) {
            const double en = ek * std::pow(static_cast<double>(need) / k, 1.0 / gamma);
            if (need * gamma * std::pow(en, -p) / (p - gamma) <= cfg.mode_tol * total) break;
            need += std::max(1, need / 8);
        }
        k = std::min(grid.n / 2, std::max(k + 8, static_cast<int>(1.2 * need)));
    }
    BNode node{b, weight, dec, keep};
    for (int j = 0; j < keep; ++j) node.trace += std::pow(dec->energies[j], -p);
    node.remainder = keep < dec->k() ? mode_remainder(dec->energies, keep, p) : 0.0;
    const int n = grid.n;
    std::vector<double> env(n, 0.0);
    for (int j = 0; j < keep; ++j) {
        const double* f = dec->mode(j);
        for (int i = 0; i < n; ++i) env[i] = std::max(env[i], std::abs(f[i]));
    }
    const double peak = *std::max_element(env.begin(), env.end());
    node.lo = 0;
    node.hi = n - 1;
    while (node.lo < n - 1 && env[node.lo] < 1e-10 * peak) ++node.lo;
    while (node.hi > 0 && env[node.hi] < 1e-10 * peak) --node.hi;
    return node;
}

std::vector<double> b_breaks(const QuadratureConfig& cfg) {
    static const double standard[] = {-1280, -640, -320, -160, -80, -40, -20, -10, -5, -2, 0, 2, 5, 12, 24, 48};
    std::vector<double> br{cfg.b_min};
    for (double v : standard)
        if (v > cfg.b_min && v < cfg.b_max) br.push_back(v);
    br.push_back(cfg.b_max);
    return br;
}

using BKey = std::tuple<int, double, double, int, double, double>;

std::shared_ptr<const std::vector<BNode>> b_nodes(const QuadratureConfig& cfg, int Q) {
    static std::mutex mutex;
    static std::map<BKey, std::shared_ptr<const std::vector<BNode>>> memo;
    const BKey key{Q, cfg.b_min, cfg.b_max, cfg.b_nodes, cfg.eig_rel_tol, cfg.mode_tol};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    const Rule rule = composite_gauss(b_breaks(cfg), cfg.b_nodes);
    auto nodes = std::make_shared<std::vector<BNode>>(rule.nodes.size());
    const double edge = b_breaks(cfg)[1];
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
        (*nodes)[i] = prepare_b(rule.nodes[i], rule.weights[i], cfg, Q);
        (*nodes)[i].deepest = rule.nodes[i] < edge && cfg.b_min < 0.0;
    });
    std::lock_guard<std::mutex> lock(mutex);
    return memo.emplace(key, std::move(nodes)).first->second;
}

// Evaluation targets: base point plus, for row j, x3 += dx3[j] and x4 += x4_start[j] + k dx4 (k < n4).
struct Targets {
    GroupPoint base;
    std::vector<double> dx3{0.0};
    std::vector<double> x4_start{0.0};
    double dx4 = 0.0;
    int n4 = 1;

    std::size_t size() const { return dx3.size() * static_cast<std::size_t>(n4); }
    double max_dx3() const {
        double m = 0.0;
        for (double v : dx3) m = std::max(m, std::abs(v));
        return m;
    }
    double a3(std::size_t row) const { return base.x[2] + dx3[row] + 0.5 * base.x[0] * base.x[1]; }
    double r12sq() const { return base.x[0] * base.x[0] + base.x[1] * base.x[1]; }
    double max_dx4() const {
        double m = 0.0;
        for (double v : x4_start) m = std::max({m, std::abs(v), std::abs(v + dx4 * (n4 - 1))});
        return m;
    }
};

struct Sums {
    std::vector<cplx> values;
    std::vector<cplx> deepest;      // part of values coming from the lowest b panel
    std::vector<double> model;      // deep-well model on the same nodes, one entry per x3 row
    double model_identity = 0.0;    // deep-well model at the identity on the same nodes
    long long nodes = 0;
};

// Below b_min both wells are harmonic with frequency w = 2 r^2 sqrt|b| and the representation
// tends to a Schroedinger representation of the Heisenberg quotient. The trace then has the
// Mehler closed form below and depends on x only through |(x1, x2)|^2 and a3.
double deep_well_trace(double w, double t, double r12sq, double a3) {
    const double u = w * t;
    if (u > 700.0) return 0.0;
    return std::cos(w * a3) * std::exp(-0.25 * w * r12sq / std::tanh(u)) / std::sinh(u);
}

// Integral of the deep-well trace over the whole region b < b_min, done in w.
double deep_well_tail(GroupTag tag, double t, double b_min, double r12sq, double a3) {
    if (!(b_min < 0.0)) return 0.0;
    const double B4 = -4.0 * b_min;
    const bool engel = tag == GroupTag::Engel;
    const double coef = engel ? 8.0 / (16.0 * pi * pi * pi) * std::pow(B4, -0.75)
                              : 8.0 * pi / (32.0 * pi * pi * pi * pi) * std::pow(B4, -1.5);
    const double power = engel ? 2.5 : 4.0;
    const double top = 60.0 / t;
    const int panels = std::max(24, static_cast<int>(std::ceil(std::abs(a3) * top / pi)));
    const Rule rule = composite_gauss(0.0, top, panels, 16);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double w = rule.nodes[i];
        sum += rule.weights[i] * std::pow(w, power) * deep_well_trace(w, t, r12sq, a3);
    }
    return coef * sum;
}

// Phase K(theta) = c0 + c1 theta + c2 theta^2 and its sensitivities to x3 (theta term) and x4 (constant).
struct PhasePoly {
    double c0, c1, c2, g3, g4;
};

PhasePoly phase_poly(const DualPoint& d, const GroupPoint& x) {
    const double k0 = rep_phase(d, x, 0.0), kp = rep_phase(d, x, 1.0), km = rep_phase(d, x, -1.0);
    PhasePoly p{k0, 0.5 * (kp - km), 0.5 * (kp + km) - k0, 0.0, 0.0};
    GroupPoint x3 = x, x4 = x;
    x3.x[2] += 1.0;
    x4.x[3] += 1.0;
    p.g3 = 0.5 * (rep_phase(d, x3, 1.0) - rep_phase(d, x3, -1.0)) - p.c1;
    p.g4 = rep_phase(d, x4, 0.0) - k0;
    return p;
}

struct NodeGeometry {
    DualPoint d;
    double q = 0.0;      // theta = sigma / q
    double tau = 0.0;    // scaled propagation time
    double shift = 0.0;  // shift in sigma units
    PhasePoly phase{};
};

NodeGeometry geometry(const DualPoint& d, const GroupPoint& x, double t, double b_expected) {
    const QuarticParams qp = dual_to_quartic(d);
    NodeGeometry g{d};
    g.q = std::cbrt(std::abs(qp.alpha));
    const double b = (qp.alpha < 0 ? -qp.beta : qp.beta) / g.q;
    if (std::abs(b - b_expected) > 1e-9 * (1.0 + std::abs(b_expected)))
        throw std::logic_error("kernel: node parametrisation does not reproduce its quartic shift");
    g.tau = t * qp.time_scale * g.q * g.q;
    g.shift = g.q * rep_shift(d, x);
    g.phase = phase_poly(d, x);
    return g;
}

DualPoint dual_node(GroupTag tag, double r, double b, double angle_or_sign) {
    if (tag == GroupTag::Engel) return {tag, angle_or_sign * 2.0 * r * r * r, -4.0 * r * r * r * r * b, 0.0};
    const double rho = 2.0 * r * r * r;
    return {tag, rho * std::cos(angle_or_sign), rho * std::sin(angle_or_sign), 4.0 * r * r * r * r * b};
}

// Adds weight * sum_sigma e^{iK} Psi(sigma + shift, sigma) for every target into out.
void accumulate(const BNode& bn, const NodeGeometry& g, double weight, const Targets& tg, std::vector<double>& A,
                std::vector<cplx>& B, std::vector<cplx>& out) {
    const SpectralDecomposition& dec = *bn.dec;
    const int n = dec.grid.n;
    const double h = dec.grid.h();
    const double e0 = dec.energies.front();
    int modes = 0;
    while (modes < bn.modes && (dec.energies[modes] - e0) * g.tau < 40.0) ++modes;

    const double sp = g.shift / h;
    const double fl = std::floor(sp);
    const int k0 = static_cast<int>(fl);
    const double u = sp - fl;
    const double wm = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double w1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double w2 = (u + 1.0) * u * (u - 1.0) / 6.0;
    const int i_lo = std::max({bn.lo, bn.lo - k0 - 2, 1 - k0});
    const int i_hi = std::min({bn.hi, bn.hi - k0 + 1, n - 3 - k0});
    if (i_lo > i_hi) return;

    const int len = i_hi - i_lo + 1;
    A.assign(len, 0.0);
    for (int j = 0; j < modes; ++j) {
        const double w = std::exp(-dec.energies[j] * g.tau);
        const double* f = dec.mode(j);
        const double* fs = f + k0;
        for (int i = i_lo; i <= i_hi; ++i) {
            const double shifted = wm * fs[i - 1] + w0 * fs[i] + w1 * fs[i + 1] + w2 * fs[i + 2];
            A[i - i_lo] += w * f[i] * shifted;
        }
    }

    const double a1 = g.phase.c1 / g.q, a2 = g.phase.c2 / (g.q * g.q);
    const double g3 = g.phase.g3 / g.q;
    const double s_lo = dec.grid.theta(i_lo);
    B.resize(len);
    for (int i = 0; i < len; ++i) {
        const double s = s_lo + i * h;
        B[i] = A[i] * std::exp(I * (s * (a1 + a2 * s)));
    }
    const std::size_t rows = tg.dx3.size();
    for (std::size_t r = 0; r < rows; ++r) {
        cplx F{};
        const double kappa = g3 * tg.dx3[r];
        if (kappa == 0.0) {
            for (int i = 0; i < len; ++i) F += B[i];
        } else {
            const cplx rho = std::exp(I * (kappa * h));
            cplx z = std::exp(I * (kappa * s_lo));
            for (int i = 0; i < len; ++i) {
                F += B[i] * z;
                z *= rho;
            }
        }
        F *= weight * h * std::exp(I * (g.phase.c0 + g.phase.g4 * tg.x4_start[r]));
        if (tg.n4 == 1) {
            out[r] += F;
        } else {
            const cplx rho = std::exp(I * (g.phase.g4 * tg.dx4));
            cplx z = F;
            cplx* row = out.data() + r * tg.n4;
            for (int k = 0; k < tg.n4; ++k) {
                row[k] += z;
                z *= rho;
            }
        }
    }
}

// Largest |sigma| in the window of a b node.
double window_extent(const BNode& bn) {
    const ThetaGrid& g = bn.dec->grid;
    return std::max(std::abs(g.theta(bn.lo)), std::abs(g.theta(bn.hi)));
}

// Total phase variation along r on [0, R], used to size the radial panels.
double radial_variation(GroupTag tag, const BNode& bn, const Targets& tg, double R, double t) {
    const double sw = window_extent(bn);
    const double kmom = std::sqrt(bn.dec->energies[bn.modes - 1]);
    const int angles = tag == GroupTag::Engel ? 1 : 8;
    const int steps = 48;
    double worst = 0.0;
    for (int a = 0; a < angles; ++a) {
        const double ang = tag == GroupTag::Engel ? 1.0 : 2.0 * pi * a / angles;
        for (int si = -2; si <= 2; ++si) {
            const double s = 0.5 * si * sw;
            double var = 0.0, prev = 0.0;
            for (int m = 1; m <= steps; ++m) {
                const double r = R * m / steps;
                const NodeGeometry g = geometry(dual_node(tag, r, bn.b, ang), tg.base, t, bn.b);
                const double th = s / g.q;
                const double K = g.phase.c0 + th * (g.phase.c1 + th * g.phase.c2);
                var += std::abs(K - prev);
                prev = K;
            }
            const NodeGeometry g = geometry(dual_node(tag, R, bn.b, ang), tg.base, t, bn.b);
            var += std::abs(g.phase.g4) * tg.max_dx4() + std::abs(g.phase.g3 / g.q) * tg.max_dx3() * sw +
                   std::abs(g.shift) * kmom;
            worst = std::max(worst, var);
        }
    }
    return worst;
}

// Number of trapezoid nodes in phi at radius r (Cartan).
int angular_nodes(const BNode& bn, const Targets& tg, double r, double t, int minimum) {
    const double sw = window_extent(bn);
    const double kmom = std::sqrt(bn.dec->energies[bn.modes - 1]);
    const int samples = 16;
    double amp = 0.0, smin = 1e300, smax = -1e300;
    for (int si = -2; si <= 2; ++si) {
        double kmin = 1e300, kmax = -1e300;
        for (int a = 0; a < samples; ++a) {
            const NodeGeometry g = geometry(dual_node(GroupTag::Cartan, r, bn.b, 2.0 * pi * a / samples), tg.base, t, bn.b);
            const double th = 0.5 * si * sw / g.q;
            const double K = g.phase.c0 + th * (g.phase.c1 + th * g.phase.c2);
            kmin = std::min(kmin, K);
            kmax = std::max(kmax, K);
            smin = std::min(smin, g.shift);
            smax = std::max(smax, g.shift);
        }
        amp = std::max(amp, 0.5 * (kmax - kmin));
    }
    amp += 0.5 * (smax - smin) * kmom;
    int m = static_cast<int>(std::ceil(amp + 12.0 * std::cbrt(amp + 1.0) + 4.0));
    m = std::max(m, minimum);
    return m + (m & 1);
}

Sums assemble(GroupTag tag, const Targets& tg, double t, const QuadratureConfig& cfg) {
    const int Q = homogeneous_dim(tag);
    const auto nodes = b_nodes(cfg, Q);
    const double pref = node_prefactor(tag);
    const std::size_t nb = nodes->size();
    std::vector<std::vector<cplx>> partial(nb);
    std::vector<long long> counts(nb, 0);
    const std::size_t rows = tg.dx3.size();
    std::vector<std::vector<double>> model(nb);
    std::vector<double> model_id(nb, 0.0);
    const double r12sq = tg.r12sq();
    parallel_for(nb, [&](std::size_t ib) {
        const BNode& bn = (*nodes)[ib];
        std::vector<cplx> acc(tg.size());
        if (bn.deepest) model[ib].assign(rows, 0.0);
        std::vector<double> scratch;
        std::vector<cplx> cscratch;
        const double e0 = bn.dec->energies.front();
        const double R = std::sqrt(cfg.r_cut / (t * e0));
        const double var = radial_variation(tag, bn, tg, R, t);
        const int panels =
            std::max(cfg.r_panels, static_cast<int>(std::ceil(var / (2.0 * pi * cfg.oscillations_per_panel))));
        const Rule rr = composite_gauss(0.0, R, panels, cfg.r_nodes);
        long long count = 0;
        for (std::size_t ir = 0; ir < rr.nodes.size(); ++ir) {
            const double r = rr.nodes[ir];
            const double radial = tag == GroupTag::Engel ? std::pow(r, 6) : std::pow(r, 9);
            const double w = pref * bn.weight * rr.weights[ir] * radial;
            if (bn.deepest) {
                const double freq = 2.0 * r * r * std::sqrt(-bn.b);
                const double mult = tag == GroupTag::Cartan ? 2.0 * pi : (cfg.full_domain ? 1.0 : 2.0);
                model_id[ib] += mult * w * deep_well_trace(freq, t, 0.0, 0.0);
                for (std::size_t j = 0; j < rows; ++j)
                    model[ib][j] += mult * w * deep_well_trace(freq, t, r12sq, tg.a3(j));
            }
            if (tag == GroupTag::Engel) {
                const int signs = cfg.full_domain ? 2 : 1;
                for (int s = 0; s < signs; ++s) {
                    const NodeGeometry g = geometry(dual_node(tag, r, bn.b, s == 0 ? 1.0 : -1.0), tg.base, t, bn.b);
                    accumulate(bn, g, w, tg, scratch, cscratch, acc);
                    ++count;
                }
            } else {
                const int m = angular_nodes(bn, tg, r, t, cfg.phi_nodes);
                const double wa = w * 2.0 * pi / m;
                for (int a = 0; a < m; ++a) {
                    const NodeGeometry g = geometry(dual_node(tag, r, bn.b, 2.0 * pi * a / m), tg.base, t, bn.b);
                    accumulate(bn, g, wa, tg, scratch, cscratch, acc);
                    ++count;
                }
            }
        }
        partial[ib] = std::move(acc);
        counts[ib] = count;
    });
    Sums s;
    s.values.assign(tg.size(), 0.0);
    s.deepest.assign(tg.size(), 0.0);
    s.model.assign(rows, 0.0);
    for (std::size_t ib = 0; ib < nb; ++ib) {
        for (std::size_t k = 0; k < tg.size(); ++k) s.values[k] += partial[ib][k];
        if ((*nodes)[ib].deepest) {
            for (std::size_t k = 0; k < tg.size(); ++k) s.deepest[k] += partial[ib][k];
            for (std::size_t j = 0; j < rows; ++j) s.model[j] += model[ib][j];
            s.model_identity += model_id[ib];
        }
        s.nodes += counts[ib];
    }
    return s;
}

// Real value and imaginary residual from the assembled complex sum.
std::pair<double, double> finish(GroupTag tag, const QuadratureConfig& cfg, cplx v) {
    if (tag == GroupTag::Engel && !cfg.full_domain) return {2.0 * v.real(), 0.0};
    return {v.real(), std::abs(v.imag())};
}

struct Finished {
    double value = 0.0;
    double imag = 0.0;
    double deep_error = 0.0;
};

// Adds the deep-well tail to target k. Its error is taken as the model mismatch on the lowest
// b panel per unit of identity weight, scaled to the identity weight of the tail.
Finished finish_target(GroupTag tag, const QuadratureConfig& cfg, double t, const Targets& tg, const Sums& s,
                       std::size_t k) {
    Finished f;
    std::tie(f.value, f.imag) = finish(tag, cfg, s.values[k]);
    if (!(cfg.b_min < 0.0)) return f;
    const std::size_t row = k / static_cast<std::size_t>(tg.n4);
    f.value += deep_well_tail(tag, t, cfg.b_min, tg.r12sq(), tg.a3(row));
    if (s.model_identity > 0.0) {
        const double mismatch = std::abs(finish(tag, cfg, s.deepest[k]).first - s.model[row]);
        f.deep_error = mismatch * deep_well_tail(tag, t, cfg.b_min, 0.0, 0.0) / s.model_identity;
    }
    return f;
}

// Identity-scale bounds for the r, upper b and mode truncations (|G_n| <= 1 on every node).
double truncation_bound(GroupTag tag, double t, const QuadratureConfig& cfg) {
    const int Q = homogeneous_dim(tag);
    const double p = 0.5 * Q;
    const auto nodes = b_nodes(cfg, Q);
    double trace = 0.0, remainder = 0.0;
    for (const BNode& bn : *nodes) {
        trace += bn.weight * bn.trace;
        remainder += bn.weight * bn.remainder;
    }
    const BNode& last = nodes->back();
    const double b_tail = last.trace * cfg.b_max / (Q - 2.5);
    const double r_tail = boost::math::gamma_q(p, cfg.r_cut) * trace;
    const double angular = tag == GroupTag::Engel ? 2.0 : 2.0 * pi;
    const double scale = node_prefactor(tag) * angular * std::tgamma(p) / (2.0 * std::pow(t, p));
    return scale * (b_tail + r_tail + remainder);
}

KernelResult evaluate_point(GroupTag tag, const GroupPoint& x, double t, const QuadratureConfig& cfg) {
    if (x.tag != tag) throw ContractViolation("heat kernel: point belongs to the other group");
    if (!(t > 0.0) || !std::isfinite(t)) throw ContractViolation("heat kernel: t must be positive");
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    Targets tg{x};
    const Sums s = assemble(tag, tg, t, cfg);
    const Finished f = finish_target(tag, cfg, t, tg, s, 0);
    KernelResult res;
    res.value = f.value;
    res.imag_residual = f.imag;
    res.node_count = s.nodes;
    res.tail_estimate = truncation_bound(tag, t, cfg) + f.deep_error;
    if (cfg.embedded_estimate) {
        QuadratureConfig coarse = cfg;
        coarse.b_nodes = std::max(2, cfg.b_nodes / 2);
        coarse.r_nodes = std::max(2, cfg.r_nodes / 2);
        coarse.phi_nodes = std::max(2, cfg.phi_nodes / 2);
        const Sums c = assemble(tag, tg, t, coarse);
        res.tail_estimate += std::abs(finish_target(tag, coarse, t, tg, c, 0).value - res.value);
    }
    res.tail_warning = res.tail_estimate > cfg.tail_tol * std::abs(res.value);
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace

QuadratureConfig default_quadrature(GroupTag tag) {
    QuadratureConfig c;
    if (tag == GroupTag::Cartan) {
        c.b_min = -30.0;
        c.b_max = 8.0;
        c.b_nodes = 8;
        c.r_nodes = 12;
    }
    return c;
}

void validate(const QuadratureConfig& c) {
    const bool ok = c.b_min < 0.0 && c.b_max > 0.0 && c.b_nodes > 0 && c.r_panels > 0 && c.r_nodes > 0 && c.r_cut > 0.0 &&
                    c.phi_nodes > 0 && c.oscillations_per_panel > 0.0 && c.eig_rel_tol > 0.0 && c.mode_tol > 0.0 &&
                    c.tail_tol > 0.0 && std::isfinite(c.b_min) && std::isfinite(c.b_max) && std::isfinite(c.r_cut);
    if (!ok) throw ContractViolation("quadrature config: counts and tolerances must be positive and b_min < 0 < b_max");
}

QuadratureConfig refined(const QuadratureConfig& cfg) {
    QuadratureConfig c = cfg;
    c.b_nodes *= 2;
    c.r_nodes *= 2;
    c.phi_nodes *= 2;
    return c;
}

KernelResult heat_kernel_g4(const GroupPoint& x, double t, const QuadratureConfig& cfg) {
    return evaluate_point(GroupTag::Engel, x, t, cfg);
}

KernelResult heat_kernel_g5(const GroupPoint& x, double t, const QuadratureConfig& cfg) {
    return evaluate_point(GroupTag::Cartan, x, t, cfg);
}

KernelResult heat_kernel(const GroupPoint& x, double t, const QuadratureConfig& cfg) {
    return x.tag == GroupTag::Engel ? heat_kernel_g4(x, t, cfg) : heat_kernel_g5(x, t, cfg);
}

cplx integrand(const DualPoint& d, double theta, const GroupPoint& x, double t) {
    if (d.tag != x.tag) throw ContractViolation("integrand: group tag mismatch");
    if (!(t > 0.0)) throw ContractViolation("integrand: t must be positive");
    const QuarticParams qp = dual_to_quartic(d);
    if (qp.alpha == 0.0) throw ContractViolation("integrand: degenerate dual point");
    // Psi_tau(th, th'; alpha, beta) = q Psi_{q^2 tau}(q th, q th'; 1, b), q = |alpha|^{1/3}.
    const double q = std::cbrt(std::abs(qp.alpha));
    const double b = (qp.alpha < 0 ? -qp.beta : qp.beta) / q;
    const double tau = t * qp.time_scale * q * q;
    const ThetaGrid grid = adapted_grid(b, 1e-6);
    const double u = rep_shift(d, x);
    int k = 32;
    PropagatorValue v;
    while (true) {
        const auto dec = cache().get({1.0, b, 1.0}, grid, std::min(k, grid.n / 2));
        v = psi_eval(*dec, tau, q * (theta + u), q * theta, 1e-14);
        if (!v.truncated || k >= grid.n / 2) break;
        k *= 2;
    }
    return std::exp(I * rep_phase(d, x, theta)) * (q * v.value);
}

std::vector<double> engel_log_slab(double x1, double x2, const std::vector<double>& a3, const std::vector<double>& a4,
                                   double t, const QuadratureConfig& cfg) {
    if (!(t > 0.0)) throw ContractViolation("engel_log_slab: t must be positive");
    validate(cfg);
    if (a3.empty() || a4.size() < 2) throw ContractViolation("engel_log_slab: need a3 values and a uniform a4 grid");
    Targets tg{make_point(GroupTag::Engel, {x1, x2, 0.0, 0.0})};
    // With a1 = x1, a2 = x2: x3 = a3 - x1 x2 / 2 and x4 = a4 + x1^2 x2 / 6 - x1 a3 / 2.
    tg.dx3.clear();
    tg.x4_start.clear();
    for (double v : a3) {
        tg.dx3.push_back(v - 0.5 * x1 * x2);
        tg.x4_start.push_back(a4.front() + x1 * x1 * x2 / 6.0 - 0.5 * x1 * v);
    }
    tg.n4 = static_cast<int>(a4.size());
    tg.dx4 = (a4.back() - a4.front()) / (tg.n4 - 1);
    const Sums s = assemble(GroupTag::Engel, tg, t, cfg);
    std::vector<double> out(s.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = finish_target(GroupTag::Engel, cfg, t, tg, s, i).value;
    return out;
}

}  // namespace nilheat
