#ifndef PWDENS_ROOT_FIND_HPP
#define PWDENS_ROOT_FIND_HPP

#include <cmath>
#include <stdexcept>

namespace pwdens {

// Safeguarded Newton for a strictly increasing function on [lo, hi] with
// f(lo) <= 0 <= f(hi).  Newton steps are taken while they stay inside the
// current bracket, otherwise the step is replaced by a bisection.  Converges
// when |f(x)| <= tol_f; since the callers have f' >= 1 this also bounds the
// error in x by tol_f.
template <class F, class DF>
double monotone_root(F&& f, DF&& df, double lo, double hi, double tol_f,
                     double seed, int max_iter = 200)
{
    double x = seed;
    if (!(x >= lo && x <= hi))
        x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x);
        if (std::fabs(fx) <= tol_f)
            return x;
        if (fx > 0)
            hi = x;
        else
            lo = x;
        double d = df(x);
        double step = (d > 0) ? fx / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi) || step == 0.0)
            xn = 0.5 * (lo + hi);
        if (xn == x) // bracket exhausted at double precision
            return x;
        x = xn;
    }
    throw std::runtime_error("monotone_root: no convergence (malformed map?)");
}

} // namespace pwdens

#endif
