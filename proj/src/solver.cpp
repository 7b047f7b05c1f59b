#include "pwdens/solver.hpp"

#include "pwdens/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pwdens {

StationaryResult stationary(const StochasticMatrix& P, double eps,
                            const StationaryOptions& opts)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("stationary: eps must be positive");
    const int n = P.n;
    HatBasis basis{P.mesh};

    std::vector<double> s(static_cast<size_t>(n)); // hat integrals
    for (int i = 0; i < n; ++i)
        s[static_cast<size_t>(i)] = basis.integral(i);

    // uniform density (nodal 1) as the start vector, in mass coordinates
    std::vector<double> mu = s;
    std::vector<double> next(static_cast<size_t>(n));
    std::vector<double> w_prev(static_cast<size_t>(n), 1.0);
    std::vector<double> w(static_cast<size_t>(n));

    const double total = kernels::sum(s.data(), s.size()); // = |Delta|

    StationaryResult out;
    std::vector<double> ratios;
    double prev_res = 0.0;

    long it = 0;
    for (; it < opts.max_iterations; ++it) {
        P.left_apply(mu.data(), next.data());
        // keep total mass fixed; P is stochastic so this only mops roundoff
        double mass = kernels::sum(next.data(), next.size());
        kernels::scale(next.data(), total / mass, next.size());
        for (int i = 0; i < n; ++i)
            w[static_cast<size_t>(i)] =
                next[static_cast<size_t>(i)] / s[static_cast<size_t>(i)];
        double res = kernels::max_abs_diff(w.data(), w_prev.data(), w.size());
        if (opts.residual_history)
            opts.residual_history->push_back(res);
        mu.swap(next);
        w.swap(w_prev);
        if (it > 2 && prev_res > 0.0 && res > 0.0)
            ratios.push_back(res / prev_res);
        prev_res = res;
        if (res <= eps) {
            out.residual = res;
            out.converged = true;
            ++it;
            break;
        }
        out.residual = res;
    }
    out.iterations = static_cast<int>(it);

    // geometric mean of the last few contraction ratios
    if (!ratios.empty()) {
        size_t k = std::min<size_t>(ratios.size(), 8);
        double acc = 0.0;
        for (size_t i = ratios.size() - k; i < ratios.size(); ++i)
            acc += std::log(ratios[i]);
        double lam = std::exp(acc / static_cast<double>(k));
        out.lambda2_estimate = lam;
        if (lam < 1.0)
            out.eps_true_estimate = out.residual / (1.0 - lam);
    }

    out.density.mesh = P.mesh;
    out.density.values.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out.density.values[static_cast<size_t>(i)] =
            mu[static_cast<size_t>(i)] / s[static_cast<size_t>(i)];
    out.density.normalize_lhat();

    if (opts.require_positive && out.converged) {
        for (double v : out.density.values)
            if (!(v > 0.0))
                throw std::runtime_error(
                    "stationary: fixed vector is not strictly positive");
    }
    return out;
}

double measure_of(const NodalDensity& density, double a, double b)
{
    const Mesh& mesh = density.mesh;
    if (a < mesh.lo - 1e-12 || b > mesh.hi + 1e-12 || a > b)
        throw std::invalid_argument("measure_of: interval outside Delta");
    a = std::max(a, mesh.lo);
    b = std::min(b, mesh.hi);
    int ja = mesh.cell_of(a), jb = mesh.cell_of(b);
    double acc = 0.0;
    for (int j = ja; j <= jb; ++j) {
        double clo = std::max(a, mesh.node(j));
        double chi = std::min(b, mesh.node(j + 1));
        if (chi <= clo)
            continue;
        // trapezoid of the linear piece on [clo, chi]
        double h = mesh.h();
        double w0 = density.values[static_cast<size_t>(j)];
        double w1 = density.values[static_cast<size_t>(j) + 1];
        double t0 = (clo - mesh.node(j)) / h;
        double t1 = (chi - mesh.node(j)) / h;
        double f0 = w0 + (w1 - w0) * t0;
        double f1 = w0 + (w1 - w0) * t1;
        acc += 0.5 * (f0 + f1) * (chi - clo);
    }
    return acc / mesh.len();
}

SupInfVar sup_inf_var(const NodalDensity& density)
{
    SupInfVar r{density.values.front(), density.values.front(), 0.0};
    for (size_t i = 1; i < density.values.size(); ++i) {
        r.sup = std::max(r.sup, density.values[i]);
        r.inf = std::min(r.inf, density.values[i]);
        r.variation += std::fabs(density.values[i] - density.values[i - 1]);
    }
    return r;
}

} // namespace pwdens
