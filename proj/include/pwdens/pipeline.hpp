#ifndef PWDENS_PIPELINE_HPP
#define PWDENS_PIPELINE_HPP

#include "pwdens/constants.hpp"
#include "pwdens/pullback.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pwdens {

struct MStar {
    bool feasible = false;
    long m = 0;           // smallest mesh with ln(m)/m <= threshold, if feasible
    double log10_m = 0.0; // log10 of the required mesh size either way
};

// Step (4): smallest m with ln(m)/m <= x*^{1+alpha} R / (3 C*), solved in
// log space.  Infeasibility (m > cap) is a report, not an error.
MStar find_m_star(const ConstantsBundle& bundle, double x_star, double R,
                  long cap = 1048576);

struct Budget {
    double discretization = 0.0; // step (4) contribution
    double solve = 0.0;          // step (5) contribution
    double truncation = 0.0;     // step (6) contribution

    double total() const { return discretization + solve + truncation; }
};

struct CertifiedResult {
    std::string mode;       // "rigorous" or "practical"
    double x_star = 0.0;
    double R = 0.0;         // requested (rigorous) or reported (practical)
    double value = 0.0;     // f~_{m,N*}(x*)
    bool feasible = true;   // false: rigorous m* exceeded the cap
    long m = 0;             // mesh actually used
    double log10_m_star = 0.0;
    long N1 = 0, N2 = 0, N2_iterative = 0, N_star = 0;
    int k = 0;              // x* in W_k (0 = inside Delta)
    double epsilon = 0.0;   // solve accuracy target
    double solver_residual = 0.0;
    double lambda2_estimate = 0.0;
    double richardson_error = 0.0; // practical mode only
    Budget budget;
    ConstantsBundle constants;
    std::vector<std::string> rigor_flags;
};

struct PipelineConfig {
    double Chat = 0.0;      // <= 0: use 1.0 and flag it
    double C_LY = 0.0;      // <= 0: use 2 D and flag it
    double tail_tol = 1e-8;
    int branch_cap = 100000;
    double eps = 0.0;       // <= 0: derive from the budget (rigorous) / 1e-12
    long m_cap = 1048576;   // 2^20 feasibility cap for m*
    int dense_cutoff = 2048;
    bool verify_ly = true;
    std::uint64_t ly_seed = 0x9e3779b97f4a7c15ULL;
};

// Steps (1)-(7) with the R/3 + R/3 + R/3 budget split.  Aborts (throws
// std::runtime_error) if the Lasota-Yorke check fails in rigorous mode.
CertifiedResult certify_pointwise(const MapSpec& spec, double x_star, double R,
                                  const PipelineConfig& config = {});

// Same pipeline at user scale; the reported error is the empirical
// Richardson difference |f_m - f_{2m}|(x*) plus the computable tail bounds,
// with every substitution recorded in rigor_flags.
CertifiedResult practical_estimate(const MapSpec& spec, double x_star, long m,
                                   long N, double eps,
                                   const PipelineConfig& config = {});

// Empirical stand-in for Chat: max over the ladder of
// sup|fhat_m - fhat_{2m}| * m / ln m.
double estimate_chat(const MapSpec& spec,
                     const std::vector<long>& ladder = {128, 256, 512},
                     const PipelineConfig& config = {});

struct ConvergenceRow {
    long m = 0;
    double sup_err_vs_ref = 0.0; // nodal sup distance to the reference mesh
    double weighted_B_err = 0.0; // grid estimate of ||f_m - f_ref||_B (0 if skipped)
};

// Mesh ladder against a fine reference; weighted_N = 0 skips the pullback
// comparison.
std::vector<ConvergenceRow> convergence_ladder(const MapSpec& spec,
                                               const std::vector<long>& ms,
                                               long ref_m, long weighted_N,
                                               const PipelineConfig& config = {});

struct KacCheck {
    double integral = 0.0;   // quadrature of f_m over (x_min, 1]
    double tail_estimate = 0.0; // analytic cap for [0, x_min]
};

// integral_0^1 f_m dlambda by geometric panels refined toward 0.
KacCheck kac_integral(const PullbackEvaluator& ev, int N, double x_min = 1e-8,
                      double shrink = 0.8, int panel_points = 8);

} // namespace pwdens

#endif
