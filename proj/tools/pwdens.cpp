// pwdens: pointwise invariant-density approximation for interval maps with a
// neutral fixed point, via an induced uniformly expanding first-return map, a
// piecewise-linear Markov discretization of its transfer operator, and an
// error-budgeted pullback to the full interval.

#include "pwdens/constants.hpp"
#include "pwdens/discretization.hpp"
#include "pwdens/inducing.hpp"
#include "pwdens/map_model.hpp"
#include "pwdens/matrix_cache.hpp"
#include "pwdens/oracle.hpp"
#include "pwdens/pipeline.hpp"
#include "pwdens/pullback.hpp"
#include "pwdens/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::json;
using namespace pwdens;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_CONFIG = 2;
constexpr int EXIT_INFEASIBLE = 3;
constexpr int EXIT_NUMERICAL = 4;

struct CommonOpts {
    std::string config_path;
    std::string family = "lsv";
    double alpha = 0.5;
    double chat = 0.0;   // 0: defaulted inside the pipeline
    double cly = 0.0;    // 0: defaulted to 2D
    double tail_tol = 1e-6;
    int branch_cap = 100000;
    int dense_cutoff = 2048;
    bool no_verify_ly = false;
    std::string out;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& o)
{
    cmd->add_option("--config", o.config_path,
                    "flat key=value configuration file (expanded before "
                    "parsing; unknown keys are rejected)");
    cmd->add_option("--family", o.family, "map family (lsv)")
        ->check(CLI::IsMember({"lsv", "custom"}));
    cmd->add_option("--alpha", o.alpha, "neutral exponent in (0,1)")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--chat", o.chat, "uniform-approximation constant Chat");
    cmd->add_option("--cly", o.cly, "Lasota-Yorke constant (default 2D)");
    cmd->add_option("--tail-tol", o.tail_tol, "branch tail tolerance");
    cmd->add_option("--branch-cap", o.branch_cap, "branch count cap");
    cmd->add_option("--dense-cutoff", o.dense_cutoff,
                    "largest m stored dense");
    cmd->add_flag("--no-verify-ly", o.no_verify_ly,
                  "skip the empirical Lasota-Yorke check");
    cmd->add_option("--out", o.out, "output file (default: stdout)");
    cmd->add_flag("--timings", o.timings,
                  "include wall-clock timings in JSON output (breaks "
                  "byte-for-byte reproducibility)");
}

MapSpec make_map(const CommonOpts& o)
{
    if (o.family != "lsv")
        throw std::invalid_argument(
            "custom maps carry function handles and are only constructible "
            "through the library API; the CLI supports --family lsv");
    return canonical_lsv(o.alpha);
}

PipelineConfig make_config(const CommonOpts& o)
{
    PipelineConfig cfg;
    cfg.Chat = o.chat;
    cfg.C_LY = o.cly;
    cfg.tail_tol = o.tail_tol;
    cfg.branch_cap = o.branch_cap;
    cfg.dense_cutoff = o.dense_cutoff;
    cfg.verify_ly = !o.no_verify_ly;
    return cfg;
}

json constants_json(const ConstantsBundle& b)
{
    return json{{"C0", b.C0},
                {"C1", b.C1},
                {"C2", b.C2},
                {"C3", b.C3},
                {"C4", b.C4},
                {"M", b.M},
                {"gamma", b.gamma},
                {"C_LY", b.C_LY},
                {"D", b.D},
                {"Chat", b.Chat},
                {"Cstar", b.Cstar},
                {"log_M", b.log_M},
                {"log_Cstar", b.log_Cstar},
                {"d", b.d},
                {"d1", b.d1}};
}

void emit(const CommonOpts& o, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream f(o.out, std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open output file " + o.out);
    f << text;
    if (text.empty() || text.back() != '\n')
        f << '\n';
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// every emitted table carries the constants and flags for auditability
std::string csv_preamble(const ConstantsBundle& b,
                         const std::vector<std::string>& flags)
{
    std::ostringstream ss;
    ss << "# constants = " << constants_json(b).dump() << "\n";
    ss << "# rigor_flags = " << json(flags).dump() << "\n";
    return ss.str();
}

ConstantsBundle bundle_for(const MapSpec& spec, const CommonOpts& o,
                           std::vector<std::string>& flags)
{
    double chat = o.chat;
    if (!(chat > 0.0)) {
        chat = 1.0;
        flags.push_back("Chat defaulted to 1.0 (not certified)");
    }
    if (!(o.cly > 0.0))
        flags.push_back("C_LY defaulted to 2D from the sampled distortion "
                        "estimate");
    return compute_constants(spec, chat, o.cly > 0.0 ? o.cly : -1.0);
}

// ----------------------------------------------------------------- commands

int cmd_constants(const CommonOpts& o, int kmax)
{
    MapSpec spec = make_map(o);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);
    json out{{"alpha", spec.alpha},
             {"x0", spec.x0},
             {"beta", spec.beta},
             {"constants", constants_json(b)},
             {"rigor_flags", flags}};
    json etas = json::object();
    for (int k = 1; k <= kmax; ++k)
        etas[std::to_string(k)] = eta_k(b, k);
    out["eta_k"] = etas;
    emit(o, out.dump(2));
    return EXIT_OK;
}

int cmd_induce(const CommonOpts& o, int branches)
{
    MapSpec spec = make_map(o);
    int B = branches > 0
                ? branches
                : branch_count_for_tolerance(spec, o.tail_tol, o.branch_cap);
    InducedMap ind = build_induced(spec, B);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);

    std::ostringstream ss;
    ss << csv_preamble(b, flags);
    ss << "# tail_mass = " << fmt(ind.tail_mass) << "\n";
    ss << "n,x_n,a_n,b_n,length\n";
    for (int n = 1; n <= ind.branch_count(); ++n) {
        const InducedBranch& br = ind.branches[static_cast<size_t>(n) - 1];
        ss << n << ',' << fmt(ind.orbit.x(n)) << ',' << fmt(br.a) << ','
           << fmt(br.b) << ',' << fmt(br.len()) << "\n";
    }
    emit(o, ss.str());
    return EXIT_OK;
}

StochasticMatrix assemble_for(const MapSpec& spec, const CommonOpts& o, int m,
                              int* B_out = nullptr, bool try_cache = true)
{
    int B = branch_count_for_tolerance(spec, o.tail_tol, o.branch_cap);
    if (B_out)
        *B_out = B;
    MatrixHeader want;
    want.map_hash = map_spec_hash(spec);
    want.alpha = spec.alpha;
    want.x0 = spec.x0;
    want.tail_tol = o.tail_tol;
    want.m = m;
    want.branch_count = B;
    if (try_cache) {
        std::string path = cache_path_for(want);
        if (!path.empty())
            if (auto hit = load_matrix(path, want))
                return *hit;
    }
    InducedMap ind = build_induced(spec, B);
    InducedBranchSet bs(ind);
    Mesh mesh{spec.x0, 1.0, m};
    AssembleOptions opts;
    opts.tail_tol = std::max(o.tail_tol, ind.tail_mass * (1.0 + 1e-12));
    opts.dense_cutoff = o.dense_cutoff;
    StochasticMatrix P = assemble(bs, mesh, opts);
    P.header = want;
    return P;
}

int cmd_discretize(const CommonOpts& o, int m)
{
    MapSpec spec = make_map(o);
    int B = 0;
    StochasticMatrix P = assemble_for(spec, o, m, &B, /*try_cache=*/false);
    std::string path = o.out.empty() ? cache_path_for(P.header) : o.out;
    if (path.empty())
        throw std::invalid_argument(
            "discretize: set --out or PWDENS_CACHE_DIR for the matrix file");
    save_matrix(P, path);

    double max_tail = 0.0;
    for (double t : P.tail_row_mass)
        max_tail = std::max(max_tail, t);
    json out{{"m", m},
             {"branches", B},
             {"dense", P.dense},
             {"nnz", P.nnz()},
             {"tail_tol", o.tail_tol},
             {"max_tail_row_mass", max_tail},
             {"path", path}};
    std::cout << out.dump(2) << "\n";
    return EXIT_OK;
}

int cmd_solve(const CommonOpts& o, int m, double eps)
{
    MapSpec spec = make_map(o);
    StochasticMatrix P = assemble_for(spec, o, m);
    StationaryResult r = stationary(P, eps);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);
    if (!r.converged)
        flags.push_back("iteration cap hit; residual " + fmt(r.residual));

    std::ostringstream ss;
    ss << csv_preamble(b, flags);
    ss << "# residual = " << fmt(r.residual)
       << ", iterations = " << r.iterations << "\n";
    ss << "node,value\n";
    for (int i = 0; i <= P.mesh.m; ++i)
        ss << fmt(P.mesh.node(i)) << ','
           << fmt(r.density.values[static_cast<size_t>(i)]) << "\n";
    emit(o, ss.str());
    return EXIT_OK;
}

int cmd_density(const CommonOpts& o, double x, double R,
                const std::string& mode, long m, long N, double eps)
{
    MapSpec spec = make_map(o);
    PipelineConfig cfg = make_config(o);

    auto t0 = std::chrono::steady_clock::now();
    CertifiedResult res;
    if (mode == "rigorous")
        res = certify_pointwise(spec, x, R, cfg);
    else
        res = practical_estimate(spec, x, m, N, eps, cfg);
    auto t1 = std::chrono::steady_clock::now();

    json out{{"mode", res.mode},
             {"x_star", res.x_star},
             {"R", res.R},
             {"feasible", res.feasible},
             {"constants", constants_json(res.constants)},
             {"rigor_flags", res.rigor_flags},
             {"log10_m_star", res.log10_m_star}};
    if (res.feasible) {
        out["value"] = res.value;
        out["m"] = res.m;
        out["N1"] = res.N1;
        out["N2"] = res.N2;
        out["N2_iterative"] = res.N2_iterative;
        out["N_star"] = res.N_star;
        out["k"] = res.k;
        out["epsilon"] = res.epsilon;
        out["solver_residual"] = res.solver_residual;
        out["lambda2_estimate"] = res.lambda2_estimate;
        out["budget"] = json{{"discretization", res.budget.discretization},
                             {"solve", res.budget.solve},
                             {"truncation", res.budget.truncation},
                             {"total", res.budget.total()}};
        if (res.mode == "practical")
            out["richardson_error"] = res.richardson_error;
    }
    if (o.timings)
        out["timings"] =
            json{{"total_s", std::chrono::duration<double>(t1 - t0).count()}};
    emit(o, out.dump(2));
    return res.feasible ? EXIT_OK : EXIT_INFEASIBLE;
}

int cmd_convergence(const CommonOpts& o, std::vector<long> ms, long ref,
                    long weighted_N)
{
    MapSpec spec = make_map(o);
    PipelineConfig cfg = make_config(o);
    auto rows = convergence_ladder(spec, ms, ref, weighted_N, cfg);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);

    std::ostringstream ss;
    ss << csv_preamble(b, flags);
    ss << "# ref_m = " << ref << "\n";
    ss << "m,sup_err_vs_ref,weighted_B_err\n";
    for (const auto& r : rows)
        ss << r.m << ',' << fmt(r.sup_err_vs_ref) << ','
           << fmt(r.weighted_B_err) << "\n";
    emit(o, ss.str());
    return EXIT_OK;
}

int cmd_verify_lemmas(const CommonOpts& o, int orbit_n)
{
    MapSpec spec = make_map(o);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);
    int B = std::max(orbit_n,
                     branch_count_for_tolerance(spec, o.tail_tol, o.branch_cap));
    InducedMap ind = build_induced(spec, B);

    struct Row {
        const char* name;
        bool pass;
        double worst;
    };
    std::vector<Row> rows;

    { // one-step expansion inequality on a grid
        double worst = -1e300;
        for (int i = 1; i <= 1000; ++i) {
            double x = spec.x0 * i / 1001.0;
            double xi = std::pow(x, spec.alpha) * (1.0 + spec.delta0(x));
            double lhs = std::pow(1.0 + xi, 1.0 + spec.alpha);
            double rhs = 1.0 + (1.0 + spec.alpha) * xi +
                         0.5 * spec.alpha * (1.0 + spec.alpha) * xi * xi;
            worst = std::max(worst, lhs - rhs);
        }
        rows.push_back({"one-step-expansion", worst <= 1e-12, worst});
    }
    { // g(x) <= 1 + C0 x^{2a}
        double worst = -1e300;
        for (int i = 1; i <= 1000; ++i) {
            double x = spec.x0 * i / 1001.0;
            double g = std::pow(spec.T1(x) / x, 1.0 + spec.alpha) / spec.dT1(x);
            worst = std::max(worst,
                             g - (1.0 + b.C0 * std::pow(x, 2.0 * spec.alpha)));
        }
        rows.push_back({"g-bound", worst <= 1e-12, worst});
    }
    { // orbit envelope x_n <= C1 n^{-1/a}
        double worst = -1e300;
        for (int n = 1; n <= ind.orbit.length(); ++n)
            worst = std::max(worst,
                             ind.orbit.x(n) -
                                 b.C1 * std::pow(static_cast<double>(n),
                                                 -1.0 / spec.alpha));
        rows.push_back({"orbit-envelope", worst <= 1e-12, worst});
    }
    { // weighted derivative envelope G_n <= bound, n <= 50
        double worst = -1e300;
        for (int i = 1; i <= 20; ++i) {
            double x = spec.x0 * i / 21.0;
            auto terms = series_denominators(spec, x, 50);
            for (int n = 1; n <= 50; ++n) {
                double g = std::log(std::pow(x, 1.0 + spec.alpha) /
                                    terms[static_cast<size_t>(n) - 1].second);
                worst = std::max(worst, g - G_n_bound_log(b, n));
            }
        }
        rows.push_back({"weighted-derivative-envelope", worst <= 1e-10, worst});
    }
    { // sum n lambda-hat(Z_n) <= C3
        double acc = 0.0;
        for (int n = 1; n <= ind.branch_count(); ++n)
            acc += n * ind.branches[static_cast<size_t>(n) - 1].len() /
                   ind.delta_len();
        rows.push_back({"return-time-mass", acc <= b.C3, acc - b.C3});
    }
    { // empirical Lasota-Yorke inequality
        LasotaYorkeReport rep = verify_lasota_yorke(ind, b.gamma, b.C_LY);
        rows.push_back({"lasota-yorke", rep.pass, rep.worst_margin});
    }

    std::ostringstream ss;
    bool all = true;
    ss << "suite,result,worst_margin\n";
    for (const auto& r : rows) {
        ss << r.name << ',' << (r.pass ? "PASS" : "FAIL") << ','
           << fmt(r.worst) << "\n";
        all = all && r.pass;
    }
    emit(o, ss.str());
    return all ? EXIT_OK : EXIT_NUMERICAL;
}

int cmd_oracle(const CommonOpts& o, long long iters, int bins,
               std::uint64_t seed, long long burn_in, bool jitter)
{
    MapSpec spec = make_map(o);
    HistogramOptions hopts;
    hopts.burn_in = burn_in;
    hopts.jitter = jitter;
    Histogram h = birkhoff_histogram(spec, iters, bins, seed, hopts);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);
    flags.push_back("Monte Carlo oracle: multinomial error bars only");

    std::ostringstream ss;
    ss << csv_preamble(b, flags);
    ss << "# n_iters = " << h.n_iters << ", burn_in = " << h.burn_in
       << ", seed = " << h.seed << ", restarts = " << h.restarts
       << ", rng = mt19937_64\n";
    ss << "bin_left,bin_right,density,sigma\n";
    for (int i = 0; i < bins; ++i)
        ss << fmt(i * h.bin_width()) << ',' << fmt((i + 1) * h.bin_width())
           << ',' << fmt(h.density[static_cast<size_t>(i)]) << ','
           << fmt(h.sigma[static_cast<size_t>(i)]) << "\n";
    emit(o, ss.str());
    return EXIT_OK;
}

int cmd_plot_data(const CommonOpts& o, int samples, int branches)
{
    MapSpec spec = make_map(o);
    InducedMap ind = build_induced(spec, branches);
    std::vector<std::string> flags;
    ConstantsBundle b = bundle_for(spec, o, flags);

    std::ostringstream ss;
    ss << csv_preamble(b, flags);
    ss << "kind,branch,x,y\n";
    for (int i = 0; i < samples; ++i) {
        double x = (i + 0.5) / samples;
        ss << "map,0," << fmt(x) << ',' << fmt(spec.T(x)) << "\n";
    }
    for (int n = 1; n <= ind.branch_count(); ++n) {
        const InducedBranch& br = ind.branches[static_cast<size_t>(n) - 1];
        int per = std::max(2, samples / ind.branch_count());
        for (int i = 0; i < per; ++i) {
            double x = br.a + (i + 0.5) * br.len() / per;
            double v = x;
            for (int s = 0; s < n; ++s)
                v = spec.T(v);
            ss << "induced," << n << ',' << fmt(x) << ',' << fmt(v) << "\n";
        }
    }
    emit(o, ss.str());
    return EXIT_OK;
}

json error_json(const std::string& what, int code)
{
    return json{{"error", what}, {"exit_code", code}};
}

// Expands "--config FILE" into --key=value tokens (inserted right after the
// subcommand name) so the option parser applies its usual validation; a key
// that matches no flag fails the parse.
std::vector<std::string> expand_config(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty())
        return args;
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot read config file " + path);
    std::vector<std::string> expanded;
    std::string line;
    while (std::getline(f, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos)
            line.erase(h);
        size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos)
            continue;
        size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.empty())
            continue;
        if (line.find('=') == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + line);
        expanded.push_back("--" + line);
    }
    // keep the subcommand first, then config values, then explicit flags
    std::vector<std::string> out;
    if (!args.empty()) {
        out.push_back(args.front());
        out.insert(out.end(), expanded.begin(), expanded.end());
        out.insert(out.end(), args.begin() + 1, args.end());
    } else {
        out = expanded;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"certified pointwise invariant densities for interval maps "
                 "with a neutral fixed point"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* c_const = app.add_subcommand("constants", "emit the certified constants");
    int kmax = 8;
    add_common(c_const, o);
    c_const->add_option("--kmax", kmax, "largest k for the eta_k table");

    auto* c_induce = app.add_subcommand("induce", "emit orbit and branch table");
    int induce_branches = 0;
    add_common(c_induce, o);
    c_induce->add_option("--branches", induce_branches,
                         "branch count (default: from --tail-tol)");

    auto* c_disc = app.add_subcommand("discretize", "assemble and cache the matrix");
    int disc_m = 128;
    add_common(c_disc, o);
    c_disc->add_option("--m", disc_m, "mesh cells")->check(CLI::PositiveNumber);

    auto* c_solve = app.add_subcommand("solve", "stationary density CSV");
    int solve_m = 128;
    double solve_eps = 1e-12;
    add_common(c_solve, o);
    c_solve->add_option("--m", solve_m, "mesh cells")->check(CLI::PositiveNumber);
    c_solve->add_option("--eps", solve_eps, "power-iteration residual target");

    auto* c_dens = app.add_subcommand("density", "pointwise density value");
    double dens_x = 0.5, dens_R = 0.1, dens_eps = 1e-12;
    long dens_m = 1024, dens_N = 10000;
    std::string dens_mode = "practical";
    add_common(c_dens, o);
    c_dens->add_option("--x", dens_x, "evaluation point in (0,1]")->required();
    c_dens->add_option("--R", dens_R, "error budget (rigorous mode)");
    c_dens->add_option("--mode", dens_mode, "rigorous|practical")
        ->check(CLI::IsMember({"rigorous", "practical"}));
    c_dens->add_option("--m", dens_m, "mesh cells (practical mode)");
    c_dens->add_option("--N", dens_N, "series truncation (practical mode)");
    c_dens->add_option("--eps", dens_eps, "solve accuracy (practical mode)");

    auto* c_conv = app.add_subcommand("convergence", "mesh-ladder study CSV");
    std::vector<long> conv_ms{128, 256, 512, 1024, 2048};
    long conv_ref = 4096, conv_wn = 0;
    add_common(c_conv, o);
    c_conv->add_option("--ms", conv_ms, "mesh ladder");
    c_conv->add_option("--ref", conv_ref, "reference mesh");
    c_conv->add_option("--weighted-N", conv_wn,
                       "series terms for the weighted-norm column (0: skip)");

    auto* c_verify = app.add_subcommand("verify-lemmas",
                                        "run the computed-bound suites");
    int verify_n = 10000;
    add_common(c_verify, o);
    c_verify->add_option("--orbit-n", verify_n, "orbit length to check");

    auto* c_oracle = app.add_subcommand("oracle", "Birkhoff histogram CSV");
    long long or_iters = 1000000, or_burn = 10000;
    int or_bins = 256;
    std::uint64_t or_seed = 1;
    bool or_jitter = false;
    add_common(c_oracle, o);
    c_oracle->add_option("--iters", or_iters, "orbit length");
    c_oracle->add_option("--bins", or_bins, "histogram bins");
    c_oracle->add_option("--seed", or_seed, "PRNG seed (mt19937_64)");
    c_oracle->add_option("--burn-in", or_burn, "discarded initial iterates");
    c_oracle->add_flag("--jitter", or_jitter, "escape exact-dyadic collapse");

    auto* c_plot = app.add_subcommand("plot-data", "map and induced-map samples");
    int plot_samples = 512, plot_branches = 24;
    add_common(c_plot, o);
    c_plot->add_option("--samples", plot_samples, "sample count");
    c_plot->add_option("--branches", plot_branches, "induced branches to plot");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const std::exception& e) {
        std::cout << error_json(e.what(), EXIT_CONFIG).dump(2) << "\n";
        return EXIT_CONFIG;
    }
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args)
        cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()),
                  const_cast<char**>(cargs.data()));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        std::cout << error_json(e.what(), EXIT_CONFIG).dump(2) << "\n";
        return EXIT_CONFIG;
    }

    try {
        if (*c_const)
            return cmd_constants(o, kmax);
        if (*c_induce)
            return cmd_induce(o, induce_branches);
        if (*c_disc)
            return cmd_discretize(o, disc_m);
        if (*c_solve)
            return cmd_solve(o, solve_m, solve_eps);
        if (*c_dens)
            return cmd_density(o, dens_x, dens_R, dens_mode, dens_m, dens_N,
                               dens_eps);
        if (*c_conv)
            return cmd_convergence(o, conv_ms, conv_ref, conv_wn);
        if (*c_verify)
            return cmd_verify_lemmas(o, verify_n);
        if (*c_oracle)
            return cmd_oracle(o, or_iters, or_bins, or_seed, or_burn, or_jitter);
        if (*c_plot)
            return cmd_plot_data(o, plot_samples, plot_branches);
        std::cout << error_json("no subcommand", EXIT_CONFIG).dump(2) << "\n";
        return EXIT_CONFIG;
    } catch (const std::invalid_argument& e) {
        std::cout << error_json(e.what(), EXIT_CONFIG).dump(2) << "\n";
        return EXIT_CONFIG;
    } catch (const std::domain_error& e) {
        std::cout << error_json(e.what(), EXIT_CONFIG).dump(2) << "\n";
        return EXIT_CONFIG;
    } catch (const std::exception& e) {
        std::cout << error_json(e.what(), EXIT_NUMERICAL).dump(2) << "\n";
        return EXIT_NUMERICAL;
    }
}
