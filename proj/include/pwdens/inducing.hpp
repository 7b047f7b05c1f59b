#ifndef PWDENS_INDUCING_HPP
#define PWDENS_INDUCING_HPP

#include "pwdens/map_model.hpp"

#include <vector>

namespace pwdens {

// Inverse orbit of the branch cut under the neutral branch:
// xs[0] = x0, xs[n] = T1^{-1}(xs[n-1]), strictly decreasing to 0.
struct NeutralOrbit {
    std::vector<double> xs;

    int length() const { return static_cast<int>(xs.size()) - 1; }
    // x_n with the convention x_{-1} = 1 (right endpoint of W_0)
    double x(int n) const { return n < 0 ? 1.0 : xs[static_cast<size_t>(n)]; }
};

// First-return branch Z_n = T2^{-1}(W_{n-1}), return time n.  Stored as the
// half-open position interval [a, b); the branch adjacent to the
// non-accumulating endpoint of Delta also owns that closed endpoint.
struct InducedBranch {
    int n;
    double a, b;

    double len() const { return b - a; }
};

// Truncated first-return map of T on Delta = [x0, 1].
struct InducedMap {
    MapSpec spec;
    NeutralOrbit orbit;
    std::vector<InducedBranch> branches; // branches[k] has return time k+1
    double tail_mass = 0.0;  // lambda-hat of the uncovered remainder (exact)
    double tail_lo = 0.0, tail_hi = 0.0; // the uncovered interval itself
    bool accumulate_left = true; // branches pile up at x0 (true) or at 1

    int branch_count() const { return static_cast<int>(branches.size()); }
    double delta_lo() const { return spec.x0; }
    double delta_hi() const { return 1.0; }
    double delta_len() const { return 1.0 - spec.x0; }
};

// Smallest branch count whose closed-form tail bound
// (C2/(beta |Delta|)) sum_{n>B} n^{-(1+1/alpha)} falls below tail_tol.
// Throws std::runtime_error if that needs more than cap branches.
int branch_count_for_tolerance(const MapSpec& spec, double tail_tol,
                               int cap = 100000);

InducedMap build_induced(const MapSpec& spec, int branch_count);

// z in Z_n with Th(z) = y: z = T2^{-1}(T1^{-(n-1)}(y)).
double branch_inverse(const InducedMap& ind, int n, double y,
                      double tol = 1e-14);

// Index n of the branch whose half-open interval contains x, or 0 if x lies
// in the uncovered tail.
int branch_of(const InducedMap& ind, double x);

// table[n-1][j] = T1^{-(n-1)}(nodes[j]); row 1 is the nodes themselves.
// Each additional depth costs one (seeded) root solve per node.
std::vector<std::vector<double>> inverse_orbit_table(
    const InducedMap& ind, const std::vector<double>& nodes, int depth);

// Streams the terms of the pullback series for a batch of points x: after n
// calls to advance(), z()[j] = T2^{-1}(T1^{-(n-1)} x_j) and
// denom()[j] = |DT^{(n)}(z()[j])| = |T2'(z)| * prod_{i=1}^{n-1} T1'(T1^{-i} x_j).
// Works for x in (0,1]; for x in Delta, depth n is the inverse of induced
// branch n at x.
class PullbackSweep {
public:
    PullbackSweep(const MapSpec& spec, std::vector<double> points,
                  double tol = 1e-14);

    void advance();
    int depth() const { return depth_; }
    const std::vector<double>& z() const { return z_; }
    const std::vector<double>& denom() const { return denom_; }

private:
    const MapSpec* spec_;
    std::vector<double> w_, z_, prod_, denom_;
    double tol_;
    int depth_ = 0;
};

// Streaming view of the same table, one row at a time: after n calls to
// advance(), values() holds T1^{-(n-1)}(nodes) and the T2 pullback
// z = T2^{-1}(values) is available per entry.  Used by matrix assembly so the
// full depth-B table never has to be stored.
class InverseOrbitSweep {
public:
    InverseOrbitSweep(const MapSpec& spec, std::vector<double> nodes,
                      double tol = 1e-14);

    // move from depth n to n+1 (first call establishes depth 1 = identity)
    void advance();
    int depth() const { return depth_; }
    const std::vector<double>& values() const { return w_; }
    // T2^{-1} applied to the current row
    const std::vector<double>& pullback();

private:
    const MapSpec* spec_;
    std::vector<double> w_, z_;
    double tol_;
    int depth_ = 0;
    bool z_dirty_ = true;
};

} // namespace pwdens

#endif
