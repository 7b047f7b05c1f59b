#include "pwdens/constants.hpp"

#include "pwdens/log_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pwdens {

ConstantsBundle compute_constants(const MapSpec& spec, double Chat, double C_LY)
{
    if (!(Chat > 0.0))
        throw std::invalid_argument("compute_constants: Chat must be positive");
    const double a = spec.alpha;
    const double x0 = spec.x0;
    const double beta = spec.beta;
    const double inv_a = 1.0 / a;
    const double d0 = spec.delta0(x0);

    ConstantsBundle b;
    b.alpha = a;
    b.x0 = x0;
    b.beta = beta;
    b.delta_len = 1.0 - x0;
    b.canonical = spec.is_canonical();
    b.D = spec.D;
    b.Chat = Chat;
    b.gamma = 1.0 / beta;
    b.C_LY = (C_LY > 0.0) ? C_LY : 2.0 * spec.D;

    b.C0 = 0.5 * a * (1.0 + a) * (1.0 + 2.0 * d0 + d0 * d0);
    b.C1 = std::pow(2.0 * (std::pow(2.0, inv_a) - 1.0), inv_a);
    b.C2 = (1.0 - x0) / std::pow(x0, 1.0 + a) * std::pow(2.0, 1.0 + inv_a) *
           std::pow(std::pow(2.0, inv_a) - 1.0, 1.0 + inv_a);
    b.C3 = 1.0 / beta +
           b.C2 / (beta * b.delta_len) * (a + (2.0 - a) / (1.0 - a));
    b.C4 = 1.0 + b.C3 * (b.C_LY / (1.0 - b.gamma) + 1.0 / b.delta_len);

    // M = C1^{1+a} e^{2 C0 C1^{2a}} / beta, assembled in log space
    b.log_M = (1.0 + a) * std::log(b.C1) +
              2.0 * b.C0 * std::pow(b.C1, 2.0 * a) - std::log(beta);
    b.M = std::exp(b.log_M); // may overflow to +inf; log form is authoritative

    // C* = Chat (1 + x0^{1+a}/beta + M(1+a)) C4
    LogScalar paren = LogScalar::from_linear(1.0 + std::pow(x0, 1.0 + a) / beta) +
                      LogScalar::from_ln(b.log_M + std::log1p(a));
    b.log_Cstar = std::log(Chat) + paren.ln + std::log(b.C4);
    b.Cstar = std::exp(b.log_Cstar);

    // feasibility constants of the return-time estimate
    b.d1 = 0.5 / std::pow(a, inv_a) - 0.5 / std::pow(1.0 + a, inv_a);
    b.d = (1.0 + a) * std::pow(2.0, a) *
          std::pow(0.5 / std::pow(1.0 + a, inv_a) + b.d1, a);
    return b;
}

double eta_k(const ConstantsBundle& bundle, int k)
{
    if (!bundle.canonical)
        throw std::invalid_argument(
            "eta_k: return-time estimate is only proved for the canonical family");
    if (k < 1)
        throw std::invalid_argument("eta_k: k must be >= 1");
    return bundle.d * (k + 2.0) / (k + 2.0 + bundle.d);
}

double G_n_bound_log(const ConstantsBundle& bundle, int n)
{
    if (n < 1)
        throw std::invalid_argument("G_n_bound: n must be >= 1");
    if (n == 1)
        return std::log(std::pow(bundle.x0, 1.0 + bundle.alpha) / bundle.beta);
    return bundle.log_M -
           (1.0 + 1.0 / bundle.alpha) * std::log(static_cast<double>(n - 1));
}

double G_n_bound(const ConstantsBundle& bundle, int n)
{
    return std::exp(G_n_bound_log(bundle, n));
}

double sum_tail_n_lambda(const ConstantsBundle& bundle, long N)
{
    if (N < 0)
        throw std::invalid_argument("sum_tail_n_lambda: N must be >= 0");
    if (N == 0)
        return bundle.C3;
    const double a = bundle.alpha;
    const double inv_a = 1.0 / a;
    const double pref = bundle.C2 / (bundle.beta * bundle.delta_len);
    // sum_{n>N} n (n-1)^{-(1+1/a)} <= (N+1)/N [N^{-1/a} + a/(1-a) N^{1-1/a}]
    double Nd = static_cast<double>(N);
    return pref * (Nd + 1.0) / Nd *
           (std::pow(Nd, -inv_a) + a / (1.0 - a) * std::pow(Nd, 1.0 - inv_a));
}

namespace {

// exact integral of |linear| over one segment, splitting at a sign change
double abs_linear_integral(double x0, double x1, double v0, double v1)
{
    double w = x1 - x0;
    if (w <= 0.0)
        return 0.0;
    if (v0 * v1 >= 0.0)
        return 0.5 * std::fabs(v0 + v1) * w;
    double t = v0 / (v0 - v1); // zero crossing
    return 0.5 * (std::fabs(v0) * t + std::fabs(v1) * (1.0 - t)) * w;
}

struct TestFunction {
    std::vector<double> xs, vs;

    double eval(double x) const
    {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        size_t j = static_cast<size_t>(std::clamp<std::ptrdiff_t>(
            it - xs.begin() - 1, 0, static_cast<std::ptrdiff_t>(xs.size()) - 2));
        double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
        t = std::clamp(t, 0.0, 1.0);
        return vs[j] * (1.0 - t) + vs[j + 1] * t;
    }
    double variation() const
    {
        double v = 0.0;
        for (size_t j = 1; j < vs.size(); ++j)
            v += std::fabs(vs[j] - vs[j - 1]);
        return v;
    }
    double l1_lhat() const // integral of |f| d(lambda-hat)
    {
        double acc = 0.0;
        for (size_t j = 1; j < xs.size(); ++j)
            acc += abs_linear_integral(xs[j - 1], xs[j], vs[j - 1], vs[j]);
        return acc / (xs.back() - xs.front());
    }
};

} // namespace

LasotaYorkeReport verify_lasota_yorke(const InducedMap& ind, double gamma,
                                      double C_LY, int n_functions,
                                      std::uint64_t seed, int grid,
                                      int max_branches)
{
    const MapSpec& spec = ind.spec;
    const double lo = ind.delta_lo(), hi = ind.delta_hi();
    const int NB = std::min(ind.branch_count(), max_branches);

    std::mt19937_64 rng(seed);
    auto unif = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    // evaluation grid for Lhat f
    std::vector<double> xs(static_cast<size_t>(grid));
    for (int j = 0; j < grid; ++j)
        xs[static_cast<size_t>(j)] = lo + (hi - lo) * j / (grid - 1.0);

    LasotaYorkeReport rep;
    rep.functions_checked = n_functions;
    rep.worst_margin = -std::numeric_limits<double>::infinity();

    // random piecewise-linear test functions on random coarse grids
    std::vector<TestFunction> funcs(static_cast<size_t>(n_functions));
    for (auto& tf : funcs) {
        int knots = 4 + static_cast<int>(unif() * 28);
        tf.xs.resize(static_cast<size_t>(knots));
        tf.vs.resize(static_cast<size_t>(knots));
        tf.xs.front() = lo;
        tf.xs.back() = hi;
        for (int j = 1; j + 1 < knots; ++j)
            tf.xs[static_cast<size_t>(j)] = lo + (hi - lo) * unif();
        std::sort(tf.xs.begin(), tf.xs.end());
        for (int j = 0; j < knots; ++j)
            tf.vs[static_cast<size_t>(j)] = 2.0 * unif() - 1.0;
    }

    // one branch sweep serves every test function: the inverse images and
    // derivatives do not depend on f
    std::vector<std::vector<double>> Lf(
        static_cast<size_t>(n_functions),
        std::vector<double>(static_cast<size_t>(grid), 0.0));
    PullbackSweep sweep(spec, xs);
    for (int n = 1; n <= NB; ++n) {
        sweep.advance();
        const auto& z = sweep.z();
        const auto& den = sweep.denom();
        for (int f = 0; f < n_functions; ++f) {
            auto& row = Lf[static_cast<size_t>(f)];
            const auto& tf = funcs[static_cast<size_t>(f)];
            for (int j = 0; j < grid; ++j)
                row[static_cast<size_t>(j)] +=
                    tf.eval(z[static_cast<size_t>(j)]) /
                    den[static_cast<size_t>(j)];
        }
    }

    for (int f = 0; f < n_functions; ++f) {
        const auto& row = Lf[static_cast<size_t>(f)];
        const auto& tf = funcs[static_cast<size_t>(f)];
        double vL = 0.0;
        for (int j = 1; j < grid; ++j)
            vL += std::fabs(row[static_cast<size_t>(j)] -
                            row[static_cast<size_t>(j) - 1]);
        double margin = vL - gamma * tf.variation() - C_LY * tf.l1_lhat();
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > 1e-9)
            ++rep.violations;
    }
    rep.pass = (rep.violations == 0);
    return rep;
}

} // namespace pwdens
