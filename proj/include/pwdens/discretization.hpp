#ifndef PWDENS_DISCRETIZATION_HPP
#define PWDENS_DISCRETIZATION_HPP

#include "pwdens/inducing.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pwdens {

// Uniform partition of Delta = [lo, hi] into m cells I_j = [c_{j-1}, c_j].
struct Mesh {
    double lo = 0.0, hi = 1.0;
    int m = 1;

    double len() const { return hi - lo; }
    double h() const { return (hi - lo) / m; }
    // exact at both endpoints, uniform to 1 ulp
    double node(int i) const { return (lo * (m - i) + hi * i) / m; }
    int cell_of(double x) const;
    std::vector<double> nodes() const;
};

// Continuous piecewise-linear hat functions over a Mesh, peak value 1,
// partition of unity.  psi_i is supported on [c_{i-1}, c_{i+1}].
struct HatBasis {
    Mesh mesh;

    double eval(int i, double x) const;
    // integral of psi_i over Delta: h for interior i, h/2 at the ends
    double integral(int i) const;
    // exact integral of psi_i over [a, b] (trapezoid on each linear piece)
    double integral_over(int i, double a, double b) const;
};

// Continuous piecewise-linear density on Delta, stored by nodal values.
// The probability convention is with respect to normalized Lebesgue measure
// lambda-hat on Delta: integral_lhat() == 1 after normalize_lhat().
struct NodalDensity {
    Mesh mesh;
    std::vector<double> values;

    double eval(double x) const;
    double integral_lhat() const;
    void normalize_lhat();
};

// Nodal projection Q_m: cell averages f_1..f_m to nodal values
// (f_1, (f_1+f_2)/2, ..., (f_{m-1}+f_m)/2, f_m).  Un-normalized.
NodalDensity apply_Qm(const HatBasis& basis, std::span<const double> cell_averages);

// A uniformly expanding map presented branch by branch: each branch is
// monotone, C^2 and onto Delta.  edge_preimages must be called with
// b = 1..count() in increasing order (the induced map streams its inverse
// orbit); call reset() to start over.
class BranchSet {
public:
    virtual ~BranchSet() = default;
    virtual int count() const = 0;
    virtual double domain_lo() const = 0;
    virtual double domain_hi() const = 0;
    // position interval of branch b (1-based)
    virtual void branch_domain(int b, double& a, double& bnd) const = 0;
    // out[j] = Th_b^{-1}(nodes[j]), monotone in j
    virtual void edge_preimages(int b, const std::vector<double>& nodes,
                                std::vector<double>& out) = 0;
    virtual void reset() = 0;
    // interval not covered by the kept branches (lo == hi when none)
    virtual void tail_interval(double& lo, double& hi) const = 0;
    virtual std::uint64_t map_hash() const = 0;
};

struct MatrixHeader {
    std::uint64_t map_hash = 0;
    double alpha = 0.0;
    double x0 = 0.0;
    double tail_tol = 0.0;
    int m = 0;
    int branch_count = 0;
};

// Row-stochastic matrix of P_m = Q_m o Lhat acting on hat-mass coordinates
// mu_i = w_i * integral(psi_i).  Left action mu -> mu P advances the
// discretized transfer operator; the left Perron vector, divided by the hat
// integrals, is the nodal vector of the stationary density f_m.
//
// Dense row-major up to the assembly dense cutoff, CSR above it.
struct StochasticMatrix {
    int n = 0; // m + 1
    Mesh mesh;
    MatrixHeader header;
    bool dense = true;
    std::vector<double> dense_rows;           // n*n, row-major
    std::vector<std::int64_t> row_ptr;        // CSR
    std::vector<std::int32_t> col;
    std::vector<double> val;
    std::vector<double> raw_row_sum;          // before renormalization
    std::vector<double> tail_row_mass;        // per-row dropped branch mass

    // y = x P  (y zeroed first; x, y of length n)
    void left_apply(const double* x, double* y) const;
    double entry(int i, int j) const; // for tests and small dumps
    std::int64_t nnz() const;
};

struct AssembleOptions {
    double tail_tol = 1e-8;
    int dense_cutoff = 2048;
    double root_tol = 1e-14;
};

// Assembles the (m+1)x(m+1) stochastic matrix from exact hat integrals
// between branch-pulled-back cell edges.  Throws std::runtime_error when the
// branch set leaves more than tail_tol of Delta uncovered.
StochasticMatrix assemble(BranchSet& map, const Mesh& mesh,
                          const AssembleOptions& opts = {});

// BranchSet view of an induced map (streaming inverse-orbit pullbacks).
class InducedBranchSet final : public BranchSet {
public:
    explicit InducedBranchSet(const InducedMap& ind, double root_tol = 1e-14);
    int count() const override;
    double domain_lo() const override;
    double domain_hi() const override;
    void branch_domain(int b, double& a, double& bnd) const override;
    void edge_preimages(int b, const std::vector<double>& nodes,
                        std::vector<double>& out) override;
    void reset() override;
    void tail_interval(double& lo, double& hi) const override;
    std::uint64_t map_hash() const override;

private:
    const InducedMap* ind_;
    double root_tol_;
    int cursor_ = 0;
    std::optional<InverseOrbitSweep> sweep_;
};

std::uint64_t map_spec_hash(const MapSpec& spec);

} // namespace pwdens

#endif
