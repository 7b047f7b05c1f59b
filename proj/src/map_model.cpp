#include "pwdens/map_model.hpp"

#include "pwdens/root_find.hpp"

#include <cmath>
#include <stdexcept>

namespace pwdens {

MapSpec canonical_lsv(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("canonical_lsv: alpha must be in (0,1)");

    const double c = std::pow(2.0, alpha); // 2^alpha
    MapSpec s;
    s.family = "lsv";
    s.alpha = alpha;
    s.x0 = 0.5;
    s.beta = 2.0;
    s.T1 = [c, alpha](double x) { return x + c * std::pow(x, 1.0 + alpha); };
    s.dT1 = [c, alpha](double x) {
        return 1.0 + (1.0 + alpha) * c * std::pow(x, alpha);
    };
    s.ddT1 = [c, alpha](double x) {
        return alpha * (1.0 + alpha) * c * std::pow(x, alpha - 1.0);
    };
    s.T2 = [](double x) { return 2.0 * x - 1.0; };
    s.dT2 = [](double) { return 2.0; };
    s.ddT2 = [](double) { return 0.0; };
    s.T2_inverse = [](double y) { return 0.5 * (y + 1.0); };
    s.delta0 = [c](double) { return c - 1.0; };
    s.delta1 = [c, alpha](double) { return (1.0 + alpha) * (c - 1.0); };
    s.D = estimate_induced_distortion(s);
    return s;
}

double inverse_T1(const MapSpec& spec, double y, double tol, double seed)
{
    if (!(y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("inverse_T1: y outside [0,1]");
    if (!(tol > 0.0))
        throw std::invalid_argument("inverse_T1: tol must be positive");
    if (y == 0.0)
        return 0.0; // neutral fixed point
    // T1 >= id on [0,x0], so the root lies in [0, min(y, x0)].  The residual
    // target scales with y (tol is an upper bound since y <= 1): deep orbit
    // points sit many orders below 1 and need relative accuracy there.
    double hi = std::min(y, spec.x0);
    return monotone_root([&](double x) { return spec.T1(x) - y; },
                         [&](double x) { return spec.dT1(x); }, 0.0, hi,
                         tol * y, seed);
}

double inverse_T1(const MapSpec& spec, double y, double tol)
{
    return inverse_T1(spec, y, tol, std::min(y, spec.x0));
}

double inverse_T2(const MapSpec& spec, double y, double tol)
{
    if (spec.T2_inverse)
        return spec.T2_inverse(y);
    if (!(y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("inverse_T2: y outside [0,1]");
    const bool inc = spec.t2_increasing();
    auto f = [&](double x) { return inc ? spec.T2(x) - y : y - spec.T2(x); };
    auto df = [&](double x) { return inc ? spec.dT2(x) : -spec.dT2(x); };
    return monotone_root(f, df, spec.x0, 1.0, tol * spec.beta,
                         0.5 * (spec.x0 + 1.0));
}

double orbit_derivative(const MapSpec& spec, double z, int n)
{
    if (n < 1)
        throw std::invalid_argument("orbit_derivative: n must be >= 1");
    const double slack = 1e-12;
    double p = 1.0;
    double x = z;
    for (int i = 0; i < n; ++i) {
        if (x < -slack || x > 1.0 + slack)
            throw std::domain_error("orbit_derivative: orbit escaped [0,1]");
        p *= std::fabs(spec.dT(x));
        x = spec.T(x);
    }
    return p;
}

double estimate_induced_distortion(const MapSpec& spec, int max_branch,
                                   int samples_per_branch)
{
    // Branch n of the induced map is T^n on Z_n = T2^{-1}(W_{n-1}); its
    // second derivative follows the chain rule recursion
    //   d2 <- T''(v) d1^2 + T'(v) d2,   d1 <- T'(v) d1,   v <- T(v).
    double sup = 0.0;
    double w_hi = 1.0;           // right endpoint of W_{n-1} in value space
    double w_lo = spec.x0;       // left endpoint (x_{n-1})
    for (int n = 1; n <= max_branch; ++n) {
        for (int s = 0; s < samples_per_branch; ++s) {
            double frac = (s + 0.5) / samples_per_branch;
            double w = w_lo + frac * (w_hi - w_lo);
            double z = inverse_T2(spec, w);
            double v = z, d1 = 1.0, d2 = 0.0;
            for (int i = 0; i < n; ++i) {
                double t1 = spec.dT(v);
                double t2 = (v < spec.x0) ? spec.ddT1(v) : spec.ddT2(v);
                d2 = t2 * d1 * d1 + t1 * d2;
                d1 = t1 * d1;
                v = spec.T(v);
            }
            sup = std::max(sup, std::fabs(d2) / (d1 * d1));
        }
        w_hi = w_lo;
        w_lo = inverse_T1(spec, w_lo);
    }
    return 1.25 * sup; // sampling margin
}

std::vector<std::string> validate(const MapSpec& spec, int grid)
{
    std::vector<std::string> bad;
    auto check = [&](bool ok, const char* what) {
        if (!ok)
            bad.emplace_back(what);
    };
    check(spec.alpha > 0.0 && spec.alpha < 1.0, "alpha outside (0,1)");
    check(spec.x0 > 0.0 && spec.x0 < 1.0, "x0 outside (0,1)");
    check(spec.beta > 1.0, "beta must exceed 1");
    check(std::fabs(spec.T1(0.0)) < 1e-12, "T1(0) != 0");
    check(std::fabs(spec.T1(spec.x0) - 1.0) < 1e-9, "T1(x0) != 1");
    const bool inc = spec.t2_increasing();
    double t2a = spec.T2(spec.x0), t2b = spec.T2(1.0);
    if (!inc)
        std::swap(t2a, t2b);
    check(std::fabs(t2a) < 1e-9 && std::fabs(t2b - 1.0) < 1e-9,
          "T2 not onto [0,1]");
    double prev1 = 0.0;
    for (int i = 1; i <= grid; ++i) {
        double x = spec.x0 * i / (grid + 1.0);
        double t1 = spec.T1(x);
        check(t1 > prev1, "T1 not strictly increasing");
        check(spec.dT1(x) > 1.0, "T1' <= 1 on (0,x0)");
        prev1 = t1;
        double y = spec.x0 + (1.0 - spec.x0) * i / (grid + 1.0);
        check(std::fabs(spec.dT2(y)) >= spec.beta * (1.0 - 1e-12),
              "|T2'| < beta");
        if (!bad.empty() && bad.size() > 8)
            break; // enough evidence
    }
    // T1'(0) = 1 via the normal form: delta1 -> 0 keeps dT1 -> 1.
    check(std::fabs(spec.dT1(1e-300) - 1.0) < 1e-9, "T1'(0) != 1");
    return bad;
}

} // namespace pwdens
