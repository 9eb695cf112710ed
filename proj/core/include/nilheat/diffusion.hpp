#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nilheat/group.hpp"

namespace nilheat {

// Counter-based stream: draw k of stream s under seed is a pure function of (seed, s, k).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next_u64();
    double uniform();  // in (0, 1)
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class Scheme { ItoCorrected, Heun };

struct SimConfig {
    GroupTag tag = GroupTag::Engel;
    double t = 0.25;
    long long n_paths = 100000;
    int n_steps = 400;
    std::uint64_t seed = 42;
    Scheme scheme = Scheme::ItoCorrected;
};

void validate(const SimConfig& cfg);

struct SampleSet {
    SimConfig config;
    std::vector<GroupPoint> points;
};

// Paths of dg = sqrt(2) X1(g) o dW1 + sqrt(2) X2(g) o dW2 from the identity (generator X1^2 + X2^2).
SampleSet simulate(const SimConfig& cfg);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct Moments {
    std::array<double, 5> mean{}, mean_se{}, var{}, var_se{};
};

Moments moments(const SampleSet& s);

// Product Gaussian kernel density estimate; stderr from batch means.
Estimate kde_estimate(const SampleSet& s, const GroupPoint& x, const std::array<double, 5>& bandwidths, int batches = 20);

// Per-coordinate Silverman rule times factor.
std::array<double, 5> silverman_bandwidths(const SampleSet& s, double factor = 0.8);

struct MarginalReport {
    double ks1 = 0.0, p1 = 0.0;  // x1 / sqrt(2t) against the standard normal
    double ks2 = 0.0, p2 = 0.0;
    double correlation = 0.0, correlation_se = 0.0;
};

MarginalReport marginal_check(const SampleSet& s);

// Asymptotic Kolmogorov distribution tail with the Stephens small-sample correction.
double kolmogorov_pvalue(double d, std::size_t n);

void write_csv(const SampleSet& s, std::ostream& os);

// Density of the diffusion at x by conditioning on the first driver. W1 is a Brownian bridge to x1;
// given W1, (x2, x3, x4) is exactly Gaussian. For Cartan, x5 is sampled from the conditioned law
// and smoothed with a one-dimensional Gaussian kernel of width x5_bandwidth. Paths use the step
// g -> g exp(dX1 l1 + dX2 l2), whose bias is O(1/n_steps).
struct BridgeConfig {
    GroupTag tag = GroupTag::Engel;
    double t = 0.25;
    long long n_paths = 1000000;
    int n_steps = 400;
    std::uint64_t seed = 7;
    double x5_bandwidth = 5e-4;
};

Estimate bridge_density(const BridgeConfig& cfg, const GroupPoint& x);

// Richardson combination 2 p(2M) - p(M) of two independent runs at M and 2M steps.
Estimate bridge_density_extrapolated(const BridgeConfig& cfg, const GroupPoint& x);

}  // namespace nilheat
