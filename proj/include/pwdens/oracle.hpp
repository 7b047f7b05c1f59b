#ifndef PWDENS_ORACLE_HPP
#define PWDENS_ORACLE_HPP

#include "pwdens/map_model.hpp"

#include <cstdint>
#include <vector>

namespace pwdens {

// Occupation histogram of a single long orbit; an independent Monte Carlo
// estimate of the invariant density of T on [0,1].
struct Histogram {
    int bins = 0;
    long long n_iters = 0;
    long long burn_in = 0;
    std::uint64_t seed = 0;
    int restarts = 0;                 // orbits restarted after FP collapse
    std::vector<long long> counts;    // sum == n_iters
    std::vector<double> density;      // counts / (n * width)
    std::vector<double> sigma;        // multinomial 1-sigma per bin

    double bin_width() const { return 1.0 / bins; }
    int bin_of(double x) const;
    double density_at(double x) const;
    double sigma_at(double x) const;
};

struct HistogramOptions {
    long long burn_in = 10000;
    bool jitter = false;     // escape hatch for maps that collapse orbits
    int restart_cap = 100;   // beyond this the map is considered degenerate
};

// Mersenne-Twister (mt19937_64) driven orbit, uniform start, burn-in
// discarded.  Orbits that collapse onto an absorbing point in binary
// floating point restart from a fresh substream (counted); more than
// restart_cap restarts aborts with a suggestion to enable jitter.
Histogram birkhoff_histogram(const MapSpec& spec, long long n_iters, int bins,
                             std::uint64_t seed,
                             const HistogramOptions& opts = {});

// Piecewise-constant density on a uniform mesh of [0,1].
struct PiecewiseConstantDensity {
    int m = 0;
    std::vector<double> values; // density per cell, integrates to 1
    int iterations = 0;
    double residual = 0.0;

    double eval(double x) const;
};

// Classical Ulam matrix U_ij = lambda(I_i cap T^{-1} I_j)/lambda(I_i) of the
// full map T, assembled exactly from the two branch inverses; stationary
// vector by power iteration.
PiecewiseConstantDensity pure_ulam_full_map(const MapSpec& spec, int m,
                                            double eps = 1e-12,
                                            long max_iterations = 2000000);

} // namespace pwdens

#endif
