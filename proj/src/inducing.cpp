#include "pwdens/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwdens {

namespace {

// branch-shrinkage constant: (1-x0)/x0^{1+a} * 2^{1+1/a} [2^{1/a}-1]^{1+1/a}
double branch_tail_c2(const MapSpec& s)
{
    double inv_a = 1.0 / s.alpha;
    return (1.0 - s.x0) / std::pow(s.x0, 1.0 + s.alpha) *
           std::pow(2.0, 1.0 + inv_a) * std::pow(std::pow(2.0, inv_a) - 1.0, 1.0 + inv_a);
}

} // namespace

int branch_count_for_tolerance(const MapSpec& spec, double tail_tol, int cap)
{
    if (!(tail_tol > 0.0))
        throw std::invalid_argument("branch_count_for_tolerance: tail_tol <= 0");
    const double inv_a = 1.0 / spec.alpha;
    const double pref = branch_tail_c2(spec) / (spec.beta * (1.0 - spec.x0));
    // sum_{n>B} n^{-(1+1/a)} <= B^{-1/a} / (1/a), by integral comparison
    auto tail = [&](double B) { return pref * std::pow(B, -inv_a) * spec.alpha; };
    if (tail(static_cast<double>(cap)) > tail_tol)
        throw std::runtime_error(
            "branch_count_for_tolerance: tail tolerance unreachable under the "
            "branch cap; raise the cap or relax tail_tol");
    int lo = 1, hi = cap;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (tail(static_cast<double>(mid)) <= tail_tol)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

InducedMap build_induced(const MapSpec& spec, int branch_count)
{
    if (branch_count < 1)
        throw std::invalid_argument("build_induced: branch count must be >= 1");

    InducedMap ind;
    ind.spec = spec;
    ind.accumulate_left = spec.t2_increasing();

    // neutral inverse orbit, one root solve per step, seeded by the previous
    ind.orbit.xs.resize(static_cast<size_t>(branch_count) + 1);
    ind.orbit.xs[0] = spec.x0;
    for (int n = 1; n <= branch_count; ++n)
        ind.orbit.xs[static_cast<size_t>(n)] =
            inverse_T1(spec, ind.orbit.xs[static_cast<size_t>(n - 1)], 1e-14,
                       ind.orbit.xs[static_cast<size_t>(n - 1)]);

    ind.branches.resize(static_cast<size_t>(branch_count));
    for (int n = 1; n <= branch_count; ++n) {
        double u = inverse_T2(spec, ind.orbit.x(n - 1));
        double v = inverse_T2(spec, ind.orbit.x(n - 2));
        InducedBranch br;
        br.n = n;
        br.a = std::min(u, v);
        br.b = std::max(u, v);
        ind.branches[static_cast<size_t>(n - 1)] = br;
    }

    const InducedBranch& last = ind.branches.back();
    if (ind.accumulate_left) {
        ind.tail_lo = spec.x0;
        ind.tail_hi = last.a;
    } else {
        ind.tail_lo = last.b;
        ind.tail_hi = 1.0;
    }
    ind.tail_mass = (ind.tail_hi - ind.tail_lo) / ind.delta_len();
    return ind;
}

double branch_inverse(const InducedMap& ind, int n, double y, double tol)
{
    if (n < 1 || n > ind.branch_count())
        throw std::domain_error("branch_inverse: branch index out of range");
    double w = y;
    for (int k = 1; k < n; ++k)
        w = inverse_T1(ind.spec, w, tol, w);
    return inverse_T2(ind.spec, w, tol);
}

int branch_of(const InducedMap& ind, double x)
{
    // branch intervals are adjacent and sorted by position; direction of the
    // return-time index depends on the orientation of T2
    const auto& br = ind.branches;
    if (ind.accumulate_left) {
        if (x < ind.tail_hi)
            return 0;
        // find k with br[k].a <= x < br[k].b (br sorted descending in a)
        int lo = 0, hi = ind.branch_count() - 1;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (x >= br[static_cast<size_t>(mid)].a)
                hi = mid;
            else
                lo = mid + 1;
        }
        return br[static_cast<size_t>(lo)].n;
    }
    if (x >= ind.tail_lo && ind.tail_hi > ind.tail_lo)
        return 0;
    int lo = 0, hi = ind.branch_count() - 1; // ascending in a
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (x >= br[static_cast<size_t>(mid)].a)
            lo = mid;
        else
            hi = mid - 1;
    }
    return br[static_cast<size_t>(lo)].n;
}

std::vector<std::vector<double>> inverse_orbit_table(
    const InducedMap& ind, const std::vector<double>& nodes, int depth)
{
    if (depth < 1)
        throw std::invalid_argument("inverse_orbit_table: depth must be >= 1");
    std::vector<std::vector<double>> table;
    table.reserve(static_cast<size_t>(depth));
    table.push_back(nodes);
    for (int n = 2; n <= depth; ++n) {
        const auto& prev = table.back();
        std::vector<double> row(prev.size());
        for (size_t j = 0; j < prev.size(); ++j)
            row[j] = inverse_T1(ind.spec, prev[j], 1e-14, prev[j]);
        table.push_back(std::move(row));
    }
    return table;
}

PullbackSweep::PullbackSweep(const MapSpec& spec, std::vector<double> points,
                             double tol)
    : spec_(&spec), w_(std::move(points)), tol_(tol)
{
    z_.resize(w_.size());
    denom_.resize(w_.size());
    prod_.assign(w_.size(), 1.0);
}

void PullbackSweep::advance()
{
    if (depth_ > 0) {
        for (size_t j = 0; j < w_.size(); ++j) {
            w_[j] = inverse_T1(*spec_, w_[j], tol_, w_[j]);
            prod_[j] *= spec_->dT1(w_[j]);
        }
    }
    ++depth_;
    for (size_t j = 0; j < w_.size(); ++j) {
        z_[j] = inverse_T2(*spec_, w_[j], tol_);
        denom_[j] = std::fabs(spec_->dT2(z_[j])) * prod_[j];
    }
}

InverseOrbitSweep::InverseOrbitSweep(const MapSpec& spec,
                                     std::vector<double> nodes, double tol)
    : spec_(&spec), w_(std::move(nodes)), tol_(tol)
{
    z_.resize(w_.size());
}

void InverseOrbitSweep::advance()
{
    if (depth_ == 0) {
        depth_ = 1; // row 1 is the nodes themselves
    } else {
        for (auto& w : w_)
            w = inverse_T1(*spec_, w, tol_, w);
        ++depth_;
    }
    z_dirty_ = true;
}

const std::vector<double>& InverseOrbitSweep::pullback()
{
    if (z_dirty_) {
        for (size_t j = 0; j < w_.size(); ++j)
            z_[j] = inverse_T2(*spec_, w_[j], tol_);
        z_dirty_ = false;
    }
    return z_;
}

} // namespace pwdens
