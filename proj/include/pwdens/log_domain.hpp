#ifndef PWDENS_LOG_DOMAIN_HPP
#define PWDENS_LOG_DOMAIN_HPP

#include <cmath>
#include <limits>

namespace pwdens {

// Strictly positive quantity carried as its natural logarithm.  The error
// constants here reach e^58 and beyond, so products, powers and comparisons
// happen in log space; linear values are materialized only on request and
// may overflow to +inf (callers check is_finite_linear).
struct LogScalar {
    double ln;

    static LogScalar from_linear(double v) { return {std::log(v)}; }
    static LogScalar from_ln(double l) { return {l}; }

    double linear() const { return std::exp(ln); }
    bool is_finite_linear() const
    {
        return ln < std::log(std::numeric_limits<double>::max());
    }

    LogScalar operator*(LogScalar o) const { return {ln + o.ln}; }
    LogScalar operator/(LogScalar o) const { return {ln - o.ln}; }
    LogScalar pow(double e) const { return {ln * e}; }

    // a + b computed as max + log1p(exp(min-max))
    LogScalar operator+(LogScalar o) const
    {
        double a = ln, b = o.ln;
        if (a < b)
            std::swap(a, b);
        if (b == -std::numeric_limits<double>::infinity())
            return {a};
        return {a + std::log1p(std::exp(b - a))};
    }

    bool operator<(LogScalar o) const { return ln < o.ln; }
    bool operator<=(LogScalar o) const { return ln <= o.ln; }

    double log10() const { return ln / std::log(10.0); }
};

} // namespace pwdens

#endif
