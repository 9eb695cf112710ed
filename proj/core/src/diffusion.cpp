#include "nilheat/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <iomanip>

#include "nilheat/parallel.hpp"

namespace nilheat {

namespace {

constexpr double pi = std::numbers::pi;

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Stats {
    double mean = 0.0, se = 0.0;
};

Stats mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// One step of the Ito form with Euler-Maruyama, dW already scaled by sqrt(2).
void ito_step(GroupTag tag, std::array<double, 5>& x, double d1, double d2, double dt) {
    const double x1 = x[0], x2 = x[1];
    x[0] += d1;
    x[1] += d2;
    x[2] += -x1 * d2;
    x[3] += 0.5 * x1 * x1 * d2;
    if (tag == GroupTag::Cartan) x[4] += x1 * x2 * d2 + x1 * dt;  // drift sum_i (X_i . grad) X_i = (0,0,0,0,x1)
}

void heun_step(GroupTag tag, std::array<double, 5>& x, double d1, double d2) {
    auto incr = [tag](const std::array<double, 5>& y, double a, double b) {
        return std::array<double, 5>{a, b, -y[0] * b, 0.5 * y[0] * y[0] * b, tag == GroupTag::Cartan ? y[0] * y[1] * b : 0.0};
    };
    const auto k1 = incr(x, d1, d2);
    std::array<double, 5> pred = x;
    for (int i = 0; i < 5; ++i) pred[i] += k1[i];
    const auto k2 = incr(pred, d1, d2);
    for (int i = 0; i < 5; ++i) x[i] += 0.5 * (k1[i] + k2[i]);
}

// Solves the symmetric positive 3x3 system C z = y; returns false if C is numerically singular.
bool solve3(const double C[3][3], const double y[3], double z[3], double& det) {
    const double c00 = C[1][1] * C[2][2] - C[1][2] * C[2][1];
    const double c01 = C[1][2] * C[2][0] - C[1][0] * C[2][2];
    const double c02 = C[1][0] * C[2][1] - C[1][1] * C[2][0];
    det = C[0][0] * c00 + C[0][1] * c01 + C[0][2] * c02;
    if (!(det > 0.0)) return false;
    const double inv[3][3] = {
        {c00 / det, (C[0][2] * C[2][1] - C[0][1] * C[2][2]) / det, (C[0][1] * C[1][2] - C[0][2] * C[1][1]) / det},
        {c01 / det, (C[0][0] * C[2][2] - C[0][2] * C[2][0]) / det, (C[0][2] * C[1][0] - C[0][0] * C[1][2]) / det},
        {c02 / det, (C[0][1] * C[2][0] - C[0][0] * C[2][1]) / det, (C[0][0] * C[1][1] - C[0][1] * C[1][0]) / det}};
    for (int i = 0; i < 3; ++i) z[i] = inv[i][0] * y[0] + inv[i][1] * y[1] + inv[i][2] * y[2];
    return true;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix(seed ^ splitmix(stream))) {}

std::uint64_t CounterRng::next_u64() { return splitmix(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

double CounterRng::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u = uniform(), v = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u));
    spare_ = rad * std::sin(2.0 * pi * v);
    has_spare_ = true;
    return rad * std::cos(2.0 * pi * v);
}

void validate(const SimConfig& cfg) {
    if (!(cfg.t > 0.0) || !std::isfinite(cfg.t)) throw ContractViolation("simulate: t must be positive");
    if (cfg.n_steps < 100) throw ContractViolation("simulate: n_steps must be at least 100");
    if (cfg.n_paths < 1) throw ContractViolation("simulate: n_paths must be positive");
}

SampleSet simulate(const SimConfig& cfg) {
    validate(cfg);
    SampleSet out{cfg, std::vector<GroupPoint>(static_cast<std::size_t>(cfg.n_paths), identity(cfg.tag))};
    const double dt = cfg.t / cfg.n_steps;
    const double s = std::sqrt(2.0 * dt);
    const std::size_t chunk = 4096;
    const std::size_t chunks = (out.points.size() + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(out.points.size(), (c + 1) * chunk);
        for (std::size_t p = c * chunk; p < end; ++p) {
            CounterRng rng(cfg.seed, p);
            std::array<double, 5> x{};
            for (int k = 0; k < cfg.n_steps; ++k) {
                const double d1 = s * rng.normal();
                const double d2 = s * rng.normal();
                if (cfg.scheme == Scheme::ItoCorrected)
                    ito_step(cfg.tag, x, d1, d2, dt);
                else
                    heun_step(cfg.tag, x, d1, d2);
            }
            out.points[p].x = x;
        }
    });
    return out;
}

Moments moments(const SampleSet& s) {
    Moments m;
    const int d = dimension(s.config.tag);
    std::vector<double> col(s.points.size()), sq(s.points.size());
    for (int i = 0; i < d; ++i) {
        for (std::size_t p = 0; p < s.points.size(); ++p) col[p] = s.points[p].x[i];
        const Stats a = mean_se(col);
        for (std::size_t p = 0; p < s.points.size(); ++p) sq[p] = (col[p] - a.mean) * (col[p] - a.mean);
        const Stats b = mean_se(sq);
        m.mean[i] = a.mean;
        m.mean_se[i] = a.se;
        m.var[i] = b.mean;
        m.var_se[i] = b.se;
    }
    return m;
}

Estimate kde_estimate(const SampleSet& s, const GroupPoint& x, const std::array<double, 5>& bw, int batches) {
    if (s.points.empty()) throw ContractViolation("kde_estimate: empty sample set");
    if (batches < 2 || static_cast<std::size_t>(batches) > s.points.size())
        throw ContractViolation("kde_estimate: invalid batch count");
    const int d = dimension(s.config.tag);
    double norm = 1.0;
    for (int i = 0; i < d; ++i) {
        if (!(bw[i] > 0.0)) throw ContractViolation("kde_estimate: bandwidths must be positive");
        norm *= bw[i] * std::sqrt(2.0 * pi);
    }
    const std::size_t n = s.points.size();
    std::vector<double> batch(batches, 0.0);
    std::vector<std::size_t> count(batches, 0);
    for (std::size_t p = 0; p < n; ++p) {
        double e = 0.0;
        for (int i = 0; i < d; ++i) {
            const double z = (s.points[p].x[i] - x.x[i]) / bw[i];
            e += z * z;
        }
        const std::size_t b = p * batches / n;
        batch[b] += std::exp(-0.5 * e) / norm;
        ++count[b];
    }
    std::vector<double> means(batches);
    for (int b = 0; b < batches; ++b) means[b] = batch[b] / count[b];
    const Stats st = mean_se(means);
    double total = 0.0;
    for (double v : batch) total += v;
    return {total / n, st.se};
}

std::array<double, 5> silverman_bandwidths(const SampleSet& s, double factor) {
    const int d = dimension(s.config.tag);
    const Moments m = moments(s);
    const double n = static_cast<double>(s.points.size());
    std::array<double, 5> bw{};
    for (int i = 0; i < d; ++i) bw[i] = factor * std::sqrt(m.var[i]) * std::pow(4.0 / ((d + 2) * n), 1.0 / (d + 4));
    return bw;
}

double kolmogorov_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lam = (sn + 0.12 + 0.11 / sn) * d;
    if (lam < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        sum += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

MarginalReport marginal_check(const SampleSet& s) {
    const std::size_t n = s.points.size();
    if (n < 2) throw ContractViolation("marginal_check: need at least two samples");
    const double scale = std::sqrt(2.0 * s.config.t);
    auto ks = [&](int coord) {
        std::vector<double> z(n);
        for (std::size_t p = 0; p < n; ++p) z[p] = s.points[p].x[coord] / scale;
        std::sort(z.begin(), z.end());
        double dmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double F = std_normal_cdf(z[i]);
            dmax = std::max({dmax, (i + 1.0) / n - F, F - static_cast<double>(i) / n});
        }
        return dmax;
    };
    MarginalReport r;
    r.ks1 = ks(0);
    r.ks2 = ks(1);
    r.p1 = kolmogorov_pvalue(r.ks1, n);
    r.p2 = kolmogorov_pvalue(r.ks2, n);
    std::vector<double> prod(n);
    for (std::size_t p = 0; p < n; ++p) prod[p] = s.points[p].x[0] * s.points[p].x[1] / (scale * scale);
    const Stats c = mean_se(prod);
    r.correlation = c.mean;
    r.correlation_se = c.se;
    return r;
}

void write_csv(const SampleSet& s, std::ostream& os) {
    const int d = dimension(s.config.tag);
    os << "# schema=1\n";
    for (int i = 0; i < d; ++i) os << (i ? "," : "") << "x" << i + 1;
    os << "\n" << std::setprecision(17);
    for (const GroupPoint& g : s.points) {
        for (int i = 0; i < d; ++i) os << (i ? "," : "") << g.x[i];
        os << "\n";
    }
}

Estimate bridge_density(const BridgeConfig& cfg, const GroupPoint& x) {
    if (x.tag != cfg.tag) throw ContractViolation("bridge_density: group tag mismatch");
    if (!(cfg.t > 0.0) || cfg.n_steps < 1 || cfg.n_paths < 2 || !(cfg.x5_bandwidth > 0.0))
        throw ContractViolation("bridge_density: invalid configuration");
    const int M = cfg.n_steps;
    const double dt = cfg.t / M;
    const double s = std::sqrt(2.0 * dt);
    const double x1 = x.x[0];
    const double lead = std::exp(-x1 * x1 / (4.0 * cfg.t)) / std::sqrt(4.0 * pi * cfg.t);
    const double target[3] = {x.x[1], x.x[2], x.x[3]};
    const bool cartan = cfg.tag == GroupTag::Cartan;
    const double h5 = cfg.x5_bandwidth;

    std::vector<double> contrib(static_cast<std::size_t>(cfg.n_paths));
    const std::size_t chunk = 1024;
    const std::size_t chunks = (contrib.size() + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<double> a1(M), left(M), coef(3 * static_cast<std::size_t>(M)), z(M);
        const std::size_t end = std::min(contrib.size(), (c + 1) * chunk);
        for (std::size_t p = c * chunk; p < end; ++p) {
            CounterRng rng(cfg.seed, p);
            double sum = 0.0;
            for (int k = 0; k < M; ++k) {
                a1[k] = s * rng.normal();
                sum += a1[k];
            }
            const double fix = (sum - x1) / M;
            double pos = 0.0;
            double C[3][3] = {};
            for (int k = 0; k < M; ++k) {
                a1[k] -= fix;
                left[k] = pos;
                // Increment of (x2, x3, x4) over g -> g exp(a1 l1 + a2 l2) is linear in a2.
                double* ck = &coef[3 * static_cast<std::size_t>(k)];
                ck[0] = 1.0;
                ck[1] = -(pos + 0.5 * a1[k]);
                ck[2] = 0.5 * pos * pos + 0.5 * pos * a1[k] + a1[k] * a1[k] / 6.0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) C[i][j] += 2.0 * dt * ck[i] * ck[j];
                pos += a1[k];
            }
            double w[3], det = 0.0;
            if (!solve3(C, target, w, det)) {
                contrib[p] = 0.0;
                continue;
            }
            const double quad = target[0] * w[0] + target[1] * w[1] + target[2] * w[2];
            double f = lead * std::exp(-0.5 * quad) / std::sqrt(std::pow(2.0 * pi, 3) * det);
            if (cartan) {
                // Draw the W2 increments conditioned on sum_k coef_k a2_k = target.
                double y[3] = {0.0, 0.0, 0.0};
                for (int k = 0; k < M; ++k) {
                    z[k] = s * rng.normal();
                    for (int i = 0; i < 3; ++i) y[i] += coef[3 * k + i] * z[k];
                }
                double resid[3] = {target[0] - y[0], target[1] - y[1], target[2] - y[2]}, v[3];
                solve3(C, resid, v, det);
                double x2 = 0.0, x5 = 0.0;
                for (int k = 0; k < M; ++k) {
                    const double* ck = &coef[3 * static_cast<std::size_t>(k)];
                    const double a2 = z[k] + 2.0 * dt * (ck[0] * v[0] + ck[1] * v[1] + ck[2] * v[2]);
                    const double xl = left[k];
                    x5 += a1[k] * a2 * a2 / 3.0 + 0.5 * xl * a2 * a2 + 0.5 * x2 * a1[k] * a2 + xl * x2 * a2;
                    x2 += a2;
                }
                const double u = (x.x[4] - x5) / h5;
                f *= std::exp(-0.5 * u * u) / (h5 * std::sqrt(2.0 * pi));
            }
            contrib[p] = f;
        }
    });
    const Stats st = mean_se(contrib);
    return {st.mean, st.se};
}

Estimate bridge_density_extrapolated(const BridgeConfig& cfg, const GroupPoint& x) {
    BridgeConfig fine = cfg;
    fine.n_steps = 2 * cfg.n_steps;
    fine.seed = splitmix(cfg.seed + 1);
    const Estimate a = bridge_density(cfg, x);
    const Estimate b = bridge_density(fine, x);
    return {2.0 * b.value - a.value, std::sqrt(4.0 * b.std_error * b.std_error + a.std_error * a.std_error)};
}

}  // namespace nilheat
