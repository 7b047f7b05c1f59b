#ifndef PWDENS_SOLVER_HPP
#define PWDENS_SOLVER_HPP

#include "pwdens/discretization.hpp"

namespace pwdens {

struct StationaryResult {
    NodalDensity density;     // lambda-hat normalized, strictly positive
    double residual = 0.0;    // sup-norm nodal change of the last iteration
    int iterations = 0;
    bool converged = false;
    double lambda2_estimate = 0.0; // from successive residual ratios; heuristic
    double eps_true_estimate = 0.0; // residual / (1 - lambda2); heuristic
};

struct StationaryOptions {
    long max_iterations = 1000000;
    bool require_positive = true;
    std::vector<double>* residual_history = nullptr; // optional trace
};

// Left power iteration mu <- mu P from the uniform density, in hat-mass
// coordinates, until the nodal sup-norm residual falls below eps.  The
// returned density is renormalized to integral 1 against lambda-hat.
// Throws when positivity fails after convergence; when the iteration cap is
// hit, returns with converged == false and the residual achieved.
StationaryResult stationary(const StochasticMatrix& P, double eps,
                            const StationaryOptions& opts = {});

// mu-hat measure of (a,b): (1/|Delta|) * integral_a^b density dlambda,
// exact on the piecewise-linear representation.
double measure_of(const NodalDensity& density, double a, double b);

struct SupInfVar {
    double sup, inf, variation;
};

// Extrema are nodal for piecewise-linear functions; variation is the sum of
// absolute nodal increments.
SupInfVar sup_inf_var(const NodalDensity& density);

} // namespace pwdens

#endif
