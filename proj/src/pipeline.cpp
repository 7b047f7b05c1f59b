#include "pwdens/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwdens {

MStar find_m_star(const ConstantsBundle& bundle, double x_star, double R,
                  long cap)
{
    if (!(x_star > 0.0 && x_star <= 1.0))
        throw std::invalid_argument("find_m_star: x* must lie in (0,1]");
    if (!(R > 0.0))
        throw std::invalid_argument("find_m_star: R must be positive");

    // threshold t = x*^{1+a} R / (3 C*), kept as a logarithm
    const double log_t = (1.0 + bundle.alpha) * std::log(x_star) +
                         std::log(R) - std::log(3.0) - bundle.log_Cstar;

    MStar out;
    // ln(m)/m is maximal near e; the smallest admissible mesh is checked first
    if (std::log(std::log(2.0) / 2.0) <= log_t) {
        out.feasible = true;
        out.m = 2;
        out.log10_m = std::log10(2.0);
        return out;
    }
    auto log_g = [](double m) { return std::log(std::log(m)) - std::log(m); };
    if (log_g(static_cast<double>(cap)) <= log_t) {
        long lo = 3, hi = cap; // ln(m)/m decreasing there
        while (lo < hi) {
            long mid = lo + (hi - lo) / 2;
            if (log_g(static_cast<double>(mid)) <= log_t)
                hi = mid;
            else
                lo = mid + 1;
        }
        out.feasible = true;
        out.m = lo;
        out.log10_m = std::log10(static_cast<double>(lo));
        return out;
    }

    // infeasible: m* = w/t with w = L + ln w, L = -log_t
    const double L = -log_t;
    double w = std::max(L, 1.0);
    for (int i = 0; i < 64; ++i)
        w = L + std::log(w);
    out.feasible = false;
    out.log10_m = (L + std::log(w)) / std::log(10.0);
    return out;
}

namespace {

struct SolveOut {
    StochasticMatrix P;
    StationaryResult st;
};

SolveOut assemble_and_solve(const InducedMap& ind, long m, double eps,
                            double tail_tol, int dense_cutoff)
{
    SolveOut out;
    Mesh mesh{ind.delta_lo(), ind.delta_hi(), static_cast<int>(m)};
    InducedBranchSet bs(ind);
    AssembleOptions opts;
    opts.tail_tol = tail_tol;
    opts.dense_cutoff = dense_cutoff;
    out.P = assemble(bs, mesh, opts);
    out.st = stationary(out.P, eps);
    return out;
}

// effective assembly tolerance: never below what the branch set achieves
double effective_tail_tol(const InducedMap& ind, double requested)
{
    return std::max(requested, ind.tail_mass * (1.0 + 1e-12));
}

// series sum bound (1/beta)((k+2)/k)^eta k/(eta-1); 1 inside Delta
double series_factor(const ConstantsBundle& b, int k)
{
    if (k == 0)
        return 1.0;
    double eta = eta_k(b, k);
    return (1.0 / b.beta) * std::pow((k + 2.0) / k, eta) * k / (eta - 1.0);
}

InducedMap build_for(const MapSpec& spec, long min_branches,
                     const PipelineConfig& cfg,
                     std::vector<std::string>* flags)
{
    long B;
    try {
        B = branch_count_for_tolerance(spec, cfg.tail_tol, cfg.branch_cap);
    } catch (const std::runtime_error&) {
        B = cfg.branch_cap;
        if (flags)
            flags->push_back("tail tolerance unreachable at branch cap; "
                             "using the cap");
    }
    B = std::max(B, min_branches);
    if (B > cfg.branch_cap)
        throw std::runtime_error(
            "pipeline: required branch count " + std::to_string(B) +
            " exceeds the cap " + std::to_string(cfg.branch_cap));
    return build_induced(spec, static_cast<int>(B));
}

void run_ly_check(const InducedMap& ind, const ConstantsBundle& bundle,
                  const PipelineConfig& cfg, bool abort_on_fail,
                  std::vector<std::string>& flags)
{
    if (!cfg.verify_ly) {
        flags.push_back("Lasota-Yorke check skipped by configuration");
        return;
    }
    LasotaYorkeReport rep = verify_lasota_yorke(ind, bundle.gamma, bundle.C_LY,
                                                100, cfg.ly_seed);
    if (rep.pass) {
        flags.push_back("C_LY verified empirically (100 test functions)");
        return;
    }
    if (abort_on_fail)
        throw std::runtime_error(
            "Lasota-Yorke verification failed: worst margin " +
            std::to_string(rep.worst_margin) + " over " +
            std::to_string(rep.violations) + " functions; supply a larger C_LY");
    flags.push_back("Lasota-Yorke check FAILED; constants downstream of C_LY "
                    "are not reliable");
}

} // namespace

CertifiedResult certify_pointwise(const MapSpec& spec, double x_star, double R,
                                  const PipelineConfig& config)
{
    if (!(x_star > 0.0 && x_star <= 1.0))
        throw std::invalid_argument("certify_pointwise: x* must lie in (0,1]");
    if (!(R > 0.0))
        throw std::invalid_argument("certify_pointwise: R must be positive");

    CertifiedResult res;
    res.mode = "rigorous";
    res.x_star = x_star;
    res.R = R;

    double chat = config.Chat;
    if (!(chat > 0.0)) {
        chat = 1.0;
        res.rigor_flags.push_back("Chat defaulted to 1.0 (not certified)");
    }
    double cly = config.C_LY;
    if (!(cly > 0.0)) {
        cly = 2.0 * spec.D;
        res.rigor_flags.push_back(
            "C_LY defaulted to 2D from the sampled distortion estimate");
    }
    res.constants = compute_constants(spec, chat, cly);

    // mesh size from the certified convergence rate
    MStar ms = find_m_star(res.constants, x_star, R, config.m_cap);
    res.log10_m_star = ms.log10_m;
    if (!ms.feasible) {
        res.feasible = false;
        res.rigor_flags.push_back("m* exceeds the feasibility cap");
        return res;
    }
    res.feasible = true;
    res.m = ms.m;

    InducedMap ind = build_for(spec, 1, config, &res.rigor_flags);
    run_ly_check(ind, res.constants, config, /*abort_on_fail=*/true,
                 res.rigor_flags);

    res.k = locate_k(ind, x_star);
    if (res.k < 0) {
        // orbit too short to bracket x*; extend to the cap once
        ind = build_for(spec, config.branch_cap, config, nullptr);
        res.k = locate_k(ind, x_star);
        if (res.k < 0)
            throw std::runtime_error(
                "certify_pointwise: x* deeper than the computable orbit");
    }

    // solve accuracy: the density error contributes at most R/3 to the
    // (lambda-normalized) value
    const double dl = ind.delta_len();
    const double S = series_factor(res.constants, res.k);
    const double divisor = S * res.constants.C4 / dl;
    double eps = config.eps > 0.0 ? config.eps : (R / 3.0) / divisor;
    res.epsilon = eps;
    res.rigor_flags.push_back(
        "solve accuracy certified via the heuristic lambda_2 estimate");

    SolveOut so;
    {
        Mesh mesh{ind.delta_lo(), ind.delta_hi(), static_cast<int>(res.m)};
        InducedBranchSet bs(ind);
        AssembleOptions aopts;
        aopts.tail_tol = effective_tail_tol(ind, config.tail_tol);
        aopts.dense_cutoff = config.dense_cutoff;
        so.P = assemble(bs, mesh, aopts);
        so.st = stationary(so.P, eps);
        for (int attempt = 0; attempt < 3 &&
                              (!so.st.converged ||
                               (so.st.eps_true_estimate > eps &&
                                so.st.lambda2_estimate < 1.0));
             ++attempt) {
            double target =
                eps * (1.0 - std::min(so.st.lambda2_estimate, 0.999)) * 0.9;
            so.st = stationary(so.P, target);
        }
    }
    res.solver_residual = so.st.residual;
    res.lambda2_estimate = so.st.lambda2_estimate;

    // truncation orders.  The certified inequalities bound the raw
    // series; the lambda-normalized value carries 1/|Delta|, so the target
    // fed to them is scaled by |Delta|.
    const double R_eff = R * dl;
    int N_for_eval;
    double trunc_bound;
    PullbackEvaluator ev =
        make_evaluator(ind, so.st.density, std::min(ind.branch_count(), 64),
                       res.constants);
    if (res.k >= 1) {
        TruncationChoice tc = truncation_N(ev, x_star, res.k, R_eff);
        if (tc.N > ind.branch_count()) {
            ind = build_for(spec, tc.N, config, nullptr);
            ev = make_evaluator(ind, so.st.density,
                                std::min<long>(tc.N, ind.branch_count()),
                                res.constants);
            tc = truncation_N(ev, x_star, res.k, R_eff);
        }
        res.N1 = tc.N1;
        res.N2 = tc.N2;
        res.N2_iterative = tc.N2_iterative;
        res.N_star = tc.N;
        const double eta = eta_k(res.constants, res.k);
        double b1 = ev.density_stats.sup *
                    std::pow(static_cast<double>(tc.N) + res.k, 1.0 - eta) /
                    (eta - 1.0) * std::pow(res.k + 2.0, eta);
        double b2 = c_tau(ev, static_cast<int>(tc.N)).tail_bound *
                    ev.density_stats.sup * S; // normalizer tail * series bound
        trunc_bound = (b1 + b2) / dl;
        N_for_eval = static_cast<int>(tc.N);
    } else {
        // x* inside Delta: only the normalizer is truncated
        long N = 1;
        double bound;
        for (;;) {
            CTau ct = c_tau(ev, static_cast<int>(N));
            bound = ct.tail_bound * ev.density_stats.sup / dl;
            if (bound <= R / 3.0 && ct.valid)
                break;
            if (N >= ind.branch_count()) {
                ind = build_for(spec, std::min<long>(2 * N, config.branch_cap),
                                config, nullptr);
                ev = make_evaluator(ind, so.st.density,
                                    std::min(ind.branch_count(), 64),
                                    res.constants);
                if (N >= ind.branch_count())
                    throw std::runtime_error(
                        "certify_pointwise: normalizer tail needs more "
                        "branches than the cap");
            }
            N = std::min<long>(2 * N, ind.branch_count());
        }
        res.N1 = res.N2 = res.N_star = N;
        trunc_bound = bound;
        N_for_eval = static_cast<int>(N);
    }

    ev = make_evaluator(ind, so.st.density, N_for_eval, res.constants);
    if (!ev.ctau.valid)
        res.rigor_flags.push_back("c_tau(N) > 1: truncation too short for "
                                  "the Kac normalizer");
    res.value = eval_fm(ev, x_star, N_for_eval);

    res.budget.discretization =
        std::exp(res.constants.log_Cstar -
                 (1.0 + res.constants.alpha) * std::log(x_star) +
                 std::log(std::log(static_cast<double>(res.m)) /
                          static_cast<double>(res.m)));
    res.budget.solve = so.st.eps_true_estimate > 0.0
                           ? so.st.eps_true_estimate * divisor
                           : eps * divisor;
    res.budget.truncation = trunc_bound;
    return res;
}

CertifiedResult practical_estimate(const MapSpec& spec, double x_star, long m,
                                   long N, double eps,
                                   const PipelineConfig& config)
{
    if (m < 2 || N < 1)
        throw std::invalid_argument("practical_estimate: need m >= 2, N >= 1");
    if (!(x_star > 0.0 && x_star <= 1.0))
        throw std::invalid_argument("practical_estimate: x* must lie in (0,1]");
    if (!(eps > 0.0))
        eps = 1e-12;

    CertifiedResult res;
    res.mode = "practical";
    res.x_star = x_star;
    res.m = m;
    res.N_star = N;
    res.epsilon = eps;
    res.rigor_flags.push_back("practical mode: Richardson error is empirical");

    double chat = config.Chat;
    if (!(chat > 0.0)) {
        chat = 1.0;
        res.rigor_flags.push_back("Chat defaulted to 1.0 (not certified)");
    }
    double cly = config.C_LY;
    if (!(cly > 0.0)) {
        cly = 2.0 * spec.D;
        res.rigor_flags.push_back(
            "C_LY defaulted to 2D from the sampled distortion estimate");
    }
    res.constants = compute_constants(spec, chat, cly);

    InducedMap ind = build_for(spec, N, config, &res.rigor_flags);
    run_ly_check(ind, res.constants, config, /*abort_on_fail=*/false,
                 res.rigor_flags);

    res.k = locate_k(ind, x_star);
    if (res.k < 0)
        throw std::runtime_error("practical_estimate: x* deeper than the orbit");

    const double tail_eff = effective_tail_tol(ind, config.tail_tol);
    SolveOut so = assemble_and_solve(ind, m, eps, tail_eff, config.dense_cutoff);
    PullbackEvaluator ev =
        make_evaluator(ind, so.st.density, static_cast<int>(N), res.constants);
    res.value = eval_fm(ev, x_star, static_cast<int>(N));
    res.solver_residual = so.st.residual;
    res.lambda2_estimate = so.st.lambda2_estimate;
    res.rigor_flags.push_back("solve accuracy via heuristic lambda_2 estimate");

    // Richardson companion at 2m
    SolveOut so2 =
        assemble_and_solve(ind, 2 * m, eps, tail_eff, config.dense_cutoff);
    PullbackEvaluator ev2 =
        make_evaluator(ind, so2.st.density, static_cast<int>(N), res.constants);
    res.richardson_error = std::fabs(res.value - eval_fm(ev2, x_star,
                                                         static_cast<int>(N)));

    const double dl = ind.delta_len();
    const double S = series_factor(res.constants, res.k);
    res.budget.discretization = res.richardson_error;
    res.budget.solve =
        (so.st.eps_true_estimate > 0.0 ? so.st.eps_true_estimate : eps) *
        S * res.constants.C4 / dl;
    double trunc = ev.ctau.tail_bound * ev.density_stats.sup *
                   (res.k >= 1 ? S : 1.0) / dl;
    if (res.k >= 1) {
        double eta = eta_k(res.constants, res.k);
        trunc += ev.density_stats.sup *
                 std::pow(static_cast<double>(N) + res.k, 1.0 - eta) /
                 (eta - 1.0) * std::pow(res.k + 2.0, eta) / dl;
    }
    res.budget.truncation = trunc;
    res.R = res.budget.total();
    if (!ev.ctau.valid)
        res.rigor_flags.push_back("c_tau(N) > 1: N too small for the "
                                  "Kac normalizer");
    return res;
}

double estimate_chat(const MapSpec& spec, const std::vector<long>& ladder,
                     const PipelineConfig& config)
{
    if (ladder.empty())
        throw std::invalid_argument("estimate_chat: empty ladder");
    InducedMap ind = build_for(spec, 1, config, nullptr);
    const double tail_eff = effective_tail_tol(ind, config.tail_tol);
    double chat = 0.0;
    for (long m : ladder) {
        SolveOut a = assemble_and_solve(ind, m, 1e-13, tail_eff,
                                        config.dense_cutoff);
        SolveOut b = assemble_and_solve(ind, 2 * m, 1e-13, tail_eff,
                                        config.dense_cutoff);
        double sup = 0.0;
        for (int i = 0; i <= a.P.mesh.m; ++i) {
            double x = a.P.mesh.node(i);
            sup = std::max(sup, std::fabs(a.st.density.values[static_cast<size_t>(i)] -
                                          b.st.density.eval(x)));
        }
        chat = std::max(chat, sup * static_cast<double>(m) /
                                  std::log(static_cast<double>(m)));
    }
    return chat;
}

std::vector<ConvergenceRow> convergence_ladder(const MapSpec& spec,
                                               const std::vector<long>& ms,
                                               long ref_m, long weighted_N,
                                               const PipelineConfig& config)
{
    InducedMap ind = build_for(spec, weighted_N, config, nullptr);
    const double tail_eff = effective_tail_tol(ind, config.tail_tol);
    ConstantsBundle bundle = compute_constants(
        spec, config.Chat > 0 ? config.Chat : 1.0,
        config.C_LY > 0 ? config.C_LY : 2.0 * spec.D);

    SolveOut ref = assemble_and_solve(ind, ref_m, 1e-13, tail_eff,
                                      config.dense_cutoff);
    PullbackEvaluator ev_ref;
    if (weighted_N > 0)
        ev_ref = make_evaluator(ind, ref.st.density,
                                static_cast<int>(weighted_N), bundle);

    std::vector<ConvergenceRow> rows;
    for (long m : ms) {
        SolveOut so = assemble_and_solve(ind, m, 1e-13, tail_eff,
                                         config.dense_cutoff);
        ConvergenceRow row;
        row.m = m;
        for (int i = 0; i <= so.P.mesh.m; ++i) {
            double x = so.P.mesh.node(i);
            row.sup_err_vs_ref = std::max(
                row.sup_err_vs_ref,
                std::fabs(so.st.density.values[static_cast<size_t>(i)] -
                          ref.st.density.eval(x)));
        }
        if (weighted_N > 0) {
            PullbackEvaluator ev_m = make_evaluator(
                ind, so.st.density, static_cast<int>(weighted_N), bundle);
            int N = static_cast<int>(weighted_N);
            row.weighted_B_err = weighted_norm_distance(
                [&](double x) { return eval_fm(ev_m, x, N); },
                [&](double x) { return eval_fm(ev_ref, x, N); },
                spec.alpha, 256, 1e-4);
        }
        rows.push_back(row);
    }
    return rows;
}

KacCheck kac_integral(const PullbackEvaluator& ev, int N, double x_min,
                      double shrink, int panel_points)
{
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    (void)panel_points; // fixed Gauss-8 panels

    KacCheck out;
    // over Delta the integral collapses exactly to c_tau(N)
    out.integral = ev.ctau.value;

    double hi = ev.induced->delta_lo();
    while (hi > x_min) {
        double lo = std::max(x_min, hi * shrink);
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (int g = 0; g < 4; ++g) {
            acc += gw[g] * eval_fm(ev, mid - half * gx[g], N);
            acc += gw[g] * eval_fm(ev, mid + half * gx[g], N);
        }
        out.integral += acc * half;
        hi = lo;
    }
    // cap the final sliver with the x^{-alpha} shape through f_m(x_min)
    double a = ev.bundle.alpha;
    out.tail_estimate = eval_fm(ev, x_min, N) * x_min / (1.0 - a);
    return out;
}

} // namespace pwdens
