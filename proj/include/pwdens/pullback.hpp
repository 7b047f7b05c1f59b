#ifndef PWDENS_PULLBACK_HPP
#define PWDENS_PULLBACK_HPP

#include "pwdens/constants.hpp"
#include "pwdens/discretization.hpp"
#include "pwdens/solver.hpp"

#include <functional>

namespace pwdens {

struct CTau {
    double value = 0.0;      // 1 / sum_{k<=N} k mu-hat(Z_k)
    double tail_bound = 0.0; // bound on |c - c(N)| from the branch-tail estimate
    bool valid = true;       // c <= 1 sanity (false means N was too small)
};

// Evaluates the pulled-back approximate density
//   f_m(x) = c(N)/|Delta| * fhat(x)                     for x in Delta,
//   f_m(x) = c(N)/|Delta| * sum_n fhat(z_n)/|DT^n(z_n)| for x in (0,x0),
// with z_n = T2^{-1} T1^{-(n-1)} x.  fhat is the lambda-hat-normalized
// stationary density; the 1/|Delta| converts it to the plain-Lebesgue
// density the Kac normalization needs, so that integral_0^1 f_m = 1 up to
// the truncation reported alongside.
struct PullbackEvaluator {
    const InducedMap* induced = nullptr;
    NodalDensity density;   // fhat (or its computed stand-in f-tilde)
    ConstantsBundle bundle;
    SupInfVar density_stats{};
    int N_used = 0;
    CTau ctau{};

    double delta_len() const { return induced->delta_len(); }
};

PullbackEvaluator make_evaluator(const InducedMap& ind, NodalDensity density,
                                 int N, const ConstantsBundle& bundle);

// Kac normalizer truncated at N terms, with the rigorous tail bound
// (sup/ (inf lhat(Z_1))) (C2/beta) N^{1-1/a} / (1/a - 1).
CTau c_tau(const PullbackEvaluator& ev, int N);

// f_m(x) with the series truncated at N terms (N <= branch count via c_tau).
double eval_fm(const PullbackEvaluator& ev, double x, int N);

// z_n and |DT^{(n)}(z_n)| for n = 1..N at a single point x in (0,1].
std::vector<std::pair<double, double>> series_denominators(const MapSpec& spec,
                                                           double x, int N);

// Index k with x in W_k = [x_k, x_{k-1}) (k = 0 means x in Delta).
// Returns -1 when x lies deeper than the computed orbit.
int locate_k(const InducedMap& ind, double x);

struct TruncationChoice {
    long N1 = 0;           // series-tail cut
    long N2 = 0;           // normalizer-tail cut, closed form
    long N2_iterative = 0; // sharper variant using the running partial sum
    long N = 0;            // max(N1, N2)
};

// Smallest truncation orders whose certified tails fit in R/6 each, so the
// combined truncation error at x* in W_k stays below R/3.
TruncationChoice truncation_N(const PullbackEvaluator& ev, double x_star,
                              int k, double R);

// Grid estimate (lower bound) of sup_x |x^{1+alpha} (f(x) - g(x))| over a
// geometric grid on (x_min, 1].
double weighted_norm_distance(const std::function<double(double)>& f,
                              const std::function<double(double)>& g,
                              double alpha, int grid_points = 1000,
                              double x_min = 1e-6);

} // namespace pwdens

#endif
