#include "pwdens/oracle.hpp"

#include "pwdens/root_find.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pwdens {

int Histogram::bin_of(double x) const
{
    int b = static_cast<int>(x * bins);
    return std::clamp(b, 0, bins - 1);
}

double Histogram::density_at(double x) const
{
    return density[static_cast<size_t>(bin_of(x))];
}

double Histogram::sigma_at(double x) const
{
    return sigma[static_cast<size_t>(bin_of(x))];
}

Histogram birkhoff_histogram(const MapSpec& spec, long long n_iters, int bins,
                             std::uint64_t seed, const HistogramOptions& opts)
{
    if (n_iters < 1 || bins < 1)
        throw std::invalid_argument("birkhoff_histogram: bad sizes");

    Histogram h;
    h.bins = bins;
    h.n_iters = n_iters;
    h.burn_in = opts.burn_in;
    h.seed = seed;
    h.counts.assign(static_cast<size_t>(bins), 0);

    std::mt19937_64 rng(seed);
    auto unif = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    auto fresh_start = [&]() {
        double x;
        do
            x = unif();
        while (x <= 0.0 || x >= 1.0);
        return x;
    };

    double x = fresh_start();
    auto step = [&](double v) {
        double next = spec.T(v);
        if (opts.jitter)
            next += (unif() - 0.5) * 0x1.0p-40;
        return next;
    };

    long long done = 0;
    for (long long i = 0; i < opts.burn_in; ++i)
        x = step(x);
    while (done < n_iters) {
        double next = step(x);
        if (!(next > 0.0 && next <= 1.0) || next == x) {
            // collapsed onto an absorbing point (or left [0,1]); restart
            ++h.restarts;
            if (h.restarts > opts.restart_cap)
                throw std::runtime_error(
                    "birkhoff_histogram: orbit keeps collapsing in floating "
                    "point; enable jitter for this map");
            x = fresh_start();
            for (long long i = 0; i < opts.burn_in; ++i)
                x = step(x);
            continue;
        }
        x = next;
        ++h.counts[static_cast<size_t>(h.bin_of(x))];
        ++done;
    }

    h.density.resize(static_cast<size_t>(bins));
    h.sigma.resize(static_cast<size_t>(bins));
    const double w = h.bin_width();
    const double n = static_cast<double>(n_iters);
    for (int b = 0; b < bins; ++b) {
        double p = static_cast<double>(h.counts[static_cast<size_t>(b)]) / n;
        h.density[static_cast<size_t>(b)] = p / w;
        h.sigma[static_cast<size_t>(b)] = std::sqrt(p * (1.0 - p) / n) / w;
    }
    return h;
}

double PiecewiseConstantDensity::eval(double x) const
{
    int j = std::clamp(static_cast<int>(x * m), 0, m - 1);
    return values[static_cast<size_t>(j)];
}

namespace {

// overlap masses of [lo, hi] against the uniform mesh, added to row weights
void add_overlaps(std::vector<double>& row, int m, double lo, double hi)
{
    if (hi <= lo)
        return;
    int jlo = std::clamp(static_cast<int>(lo * m), 0, m - 1);
    int jhi = std::clamp(static_cast<int>(hi * m), 0, m - 1);
    for (int j = jlo; j <= jhi; ++j) {
        double a = std::max(lo, static_cast<double>(j) / m);
        double b = std::min(hi, static_cast<double>(j + 1) / m);
        if (b > a)
            row[static_cast<size_t>(j)] += b - a;
    }
}

} // namespace

PiecewiseConstantDensity pure_ulam_full_map(const MapSpec& spec, int m,
                                            double eps, long max_iterations)
{
    if (m < 2)
        throw std::invalid_argument("pure_ulam_full_map: m must be >= 2");

    // branch preimages of the cell edges e_j = j/m
    std::vector<double> v1(static_cast<size_t>(m) + 1); // T1^{-1}, in [0, x0]
    std::vector<double> v2(static_cast<size_t>(m) + 1); // T2^{-1}, in [x0, 1]
    for (int j = 0; j <= m; ++j) {
        double e = static_cast<double>(j) / m;
        v1[static_cast<size_t>(j)] = inverse_T1(spec, e);
        v2[static_cast<size_t>(j)] = inverse_T2(spec, e);
    }

    // sparse rows: row i lists the cells j with T(I_i) touching I_j,
    // built column-major from the preimage intervals then transposed
    std::vector<std::vector<std::pair<int, double>>> cols_of_row(
        static_cast<size_t>(m));
    for (int j = 1; j <= m; ++j) {
        std::vector<double> wrow(static_cast<size_t>(m), 0.0);
        double a1 = v1[static_cast<size_t>(j) - 1], b1 = v1[static_cast<size_t>(j)];
        if (a1 > b1)
            std::swap(a1, b1);
        add_overlaps(wrow, m, a1, b1);
        double a2 = v2[static_cast<size_t>(j) - 1], b2 = v2[static_cast<size_t>(j)];
        if (a2 > b2)
            std::swap(a2, b2);
        add_overlaps(wrow, m, a2, b2);
        for (int i = 0; i < m; ++i)
            if (wrow[static_cast<size_t>(i)] > 0.0)
                cols_of_row[static_cast<size_t>(i)].emplace_back(
                    j - 1, wrow[static_cast<size_t>(i)] * m); // / lambda(I_i)
    }
    // renormalize rows to unit sum (they are exact partitions up to root tol)
    for (auto& row : cols_of_row) {
        double s = 0.0;
        for (auto& [j, u] : row)
            s += u;
        if (!(s > 0.0))
            throw std::runtime_error("pure_ulam_full_map: empty row");
        for (auto& [j, u] : row)
            u /= s;
    }

    std::vector<double> p(static_cast<size_t>(m), 1.0 / m), q(static_cast<size_t>(m));
    PiecewiseConstantDensity out;
    out.m = m;
    long it = 0;
    double res = 1.0;
    for (; it < max_iterations; ++it) {
        std::fill(q.begin(), q.end(), 0.0);
        for (int i = 0; i < m; ++i)
            for (auto& [j, u] : cols_of_row[static_cast<size_t>(i)])
                q[static_cast<size_t>(j)] += p[static_cast<size_t>(i)] * u;
        double mass = 0.0;
        for (double v : q)
            mass += v;
        res = 0.0;
        for (int i = 0; i < m; ++i) {
            q[static_cast<size_t>(i)] /= mass;
            res = std::max(res, std::fabs(q[static_cast<size_t>(i)] -
                                          p[static_cast<size_t>(i)]));
        }
        p.swap(q);
        if (res * m <= eps) { // residual in density units
            ++it;
            break;
        }
    }
    out.iterations = static_cast<int>(it);
    out.residual = res * m;
    out.values.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        out.values[static_cast<size_t>(i)] = p[static_cast<size_t>(i)] * m;
    return out;
}

} // namespace pwdens
