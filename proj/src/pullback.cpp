#include "pwdens/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwdens {

PullbackEvaluator make_evaluator(const InducedMap& ind, NodalDensity density,
                                 int N, const ConstantsBundle& bundle)
{
    PullbackEvaluator ev;
    ev.induced = &ind;
    ev.density = std::move(density);
    ev.bundle = bundle;
    ev.density_stats = sup_inf_var(ev.density);
    ev.N_used = N;
    ev.ctau = c_tau(ev, N);
    return ev;
}

CTau c_tau(const PullbackEvaluator& ev, int N)
{
    const InducedMap& ind = *ev.induced;
    if (N < 1 || N > ind.branch_count())
        throw std::invalid_argument("c_tau: N outside the computed branches");
    double s = 0.0;
    for (int k = 1; k <= N; ++k) {
        const InducedBranch& br = ind.branches[static_cast<size_t>(k) - 1];
        s += k * measure_of(ev.density, br.a, br.b);
    }
    CTau out;
    out.value = 1.0 / s;
    out.valid = out.value <= 1.0 + 1e-9;

    const double a = ev.bundle.alpha;
    const double inv_a = 1.0 / a;
    const InducedBranch& z1 = ind.branches.front();
    double lhat_z1 = z1.len() / ind.delta_len();
    out.tail_bound = ev.density_stats.sup /
                     (ev.density_stats.inf * lhat_z1) *
                     (ev.bundle.C2 / ev.bundle.beta) *
                     std::pow(static_cast<double>(N), 1.0 - inv_a) /
                     (inv_a - 1.0);
    return out;
}

double eval_fm(const PullbackEvaluator& ev, double x, int N)
{
    if (!(x > 0.0 && x <= 1.0))
        throw std::domain_error("eval_fm: x must lie in (0,1]");
    const InducedMap& ind = *ev.induced;
    const double dl = ev.delta_len();
    const double c = (N == ev.N_used) ? ev.ctau.value : c_tau(ev, N).value;
    if (x >= ind.delta_lo())
        return c * ev.density.eval(x) / dl;

    PullbackSweep sweep(ind.spec, {x});
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) {
        sweep.advance();
        acc += ev.density.eval(sweep.z()[0]) / sweep.denom()[0];
    }
    return c * acc / dl;
}

std::vector<std::pair<double, double>> series_denominators(const MapSpec& spec,
                                                           double x, int N)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(N));
    PullbackSweep sweep(spec, {x});
    for (int n = 1; n <= N; ++n) {
        sweep.advance();
        out.emplace_back(sweep.z()[0], sweep.denom()[0]);
    }
    return out;
}

int locate_k(const InducedMap& ind, double x)
{
    if (x >= ind.delta_lo())
        return 0;
    const auto& xs = ind.orbit.xs;
    if (x < xs.back())
        return -1; // beyond the computed orbit
    // W_k = [x_k, x_{k-1}): find smallest k with x >= x_k (xs descending)
    int lo = 1, hi = ind.orbit.length();
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (x >= xs[static_cast<size_t>(mid)])
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

TruncationChoice truncation_N(const PullbackEvaluator& ev, double x_star,
                              int k, double R)
{
    if (!(R > 0.0))
        throw std::invalid_argument("truncation_N: R must be positive");
    if (k < 1)
        throw std::invalid_argument("truncation_N: x* must lie left of Delta");
    if (locate_k(*ev.induced, x_star) != k)
        throw std::invalid_argument(
            "truncation_N: k does not bracket x* in the neutral orbit");

    const ConstantsBundle& b = ev.bundle;
    const double eta = eta_k(b, k);
    const double sup = ev.density_stats.sup;
    const double inf = ev.density_stats.inf;
    const double a = b.alpha;
    const double inv_a = 1.0 / a;
    const InducedMap& ind = *ev.induced;
    const double lhat_z1 = ind.branches.front().len() / ind.delta_len();

    TruncationChoice out;

    // series tail: sup (N1+k)^{1-eta}/(eta-1) (k+2)^eta <= R/6
    {
        double ln_rhs = std::log(6.0) + std::log(sup) +
                        eta * std::log(k + 2.0) - std::log(R) -
                        std::log(eta - 1.0);
        double n1 = std::exp(ln_rhs / (eta - 1.0)) - k;
        out.N1 = std::max<long>(1, static_cast<long>(std::ceil(n1)));
        auto bound1 = [&](long N) {
            return sup * std::pow(static_cast<double>(N) + k, 1.0 - eta) /
                   (eta - 1.0) * std::pow(k + 2.0, eta);
        };
        while (bound1(out.N1) > R / 6.0)
            ++out.N1; // guard against rounding in the closed form
    }

    // normalizer tail times the series bound:
    // sup^2/(inf lhat(Z1)) (C2/beta^2) N^{1-1/a}/(1/a-1) ((k+2)/k)^eta k/(eta-1) <= R/6
    const double series_bound =
        std::pow((k + 2.0) / k, eta) * k / (eta - 1.0);
    {
        double A = sup * sup / (inf * lhat_z1) * b.C2 /
                   (b.beta * b.beta) / (inv_a - 1.0) * series_bound;
        double n2 = std::pow(6.0 * A / R, a / (1.0 - a));
        out.N2 = std::max<long>(1, static_cast<long>(std::ceil(n2)));
        auto bound2 = [&](long N) {
            return A * std::pow(static_cast<double>(N), 1.0 - inv_a);
        };
        while (bound2(out.N2) > R / 6.0)
            ++out.N2;
    }

    // iterative variant: keep the running partial sum in the denominator
    {
        double partial = 0.0;
        long N = 0;
        const long cap = ind.branch_count();
        double tail_pref = sup * (b.C2 / b.beta) / (inv_a - 1.0) *
                           (sup / b.beta) * series_bound;
        while (N < cap) {
            ++N;
            const InducedBranch& br = ind.branches[static_cast<size_t>(N) - 1];
            partial += N * measure_of(ev.density, br.a, br.b);
            double bound = tail_pref *
                           std::pow(static_cast<double>(N), 1.0 - inv_a) /
                           partial;
            if (bound <= R / 6.0)
                break;
        }
        out.N2_iterative = N;
    }

    out.N = std::max(out.N1, out.N2);
    return out;
}

double weighted_norm_distance(const std::function<double(double)>& f,
                              const std::function<double(double)>& g,
                              double alpha, int grid_points, double x_min)
{
    double worst = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        double t = (grid_points == 1) ? 1.0 : i / (grid_points - 1.0);
        double x = std::pow(x_min, 1.0 - t); // x_min .. 1, log-spaced
        double w = std::pow(x, 1.0 + alpha);
        worst = std::max(worst, std::fabs(w * (f(x) - g(x))));
    }
    return worst;
}

} // namespace pwdens
