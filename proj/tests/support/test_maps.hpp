#ifndef PWDENS_TESTS_TEST_MAPS_HPP
#define PWDENS_TESTS_TEST_MAPS_HPP

#include "pwdens/discretization.hpp"
#include "pwdens/map_model.hpp"

#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

// Fixture maps shared by the unit and acceptance suites.

namespace test_maps {

// x -> k x mod 1 on [0,1] presented through k onto linear branches
// (k = 2 is the doubling map).
class LinearBranchSet final : public pwdens::BranchSet {
public:
    explicit LinearBranchSet(int k) : k_(k) {}

    int count() const override { return k_; }
    double domain_lo() const override { return 0.0; }
    double domain_hi() const override { return 1.0; }
    void branch_domain(int b, double& a, double& bnd) const override
    {
        a = static_cast<double>(b - 1) / k_;
        bnd = static_cast<double>(b) / k_;
    }
    void edge_preimages(int b, const std::vector<double>& nodes,
                        std::vector<double>& out) override
    {
        out.resize(nodes.size());
        for (size_t j = 0; j < nodes.size(); ++j)
            out[j] = (nodes[j] + (b - 1)) / k_;
    }
    void reset() override {}
    void tail_interval(double& lo, double& hi) const override { lo = hi = 0.0; }
    std::uint64_t map_hash() const override
    {
        return 0xd0b1e5ULL + static_cast<std::uint64_t>(k_);
    }

private:
    int k_;
};

// Neutral map with a decreasing right branch: T1(x) = x + x^{1+a} on
// [0, x0) with x0 + x0^{1+a} = 1, T2(x) = (1-x)/(1-x0) on [x0, 1].
inline pwdens::MapSpec decreasing_t2_map(double alpha)
{
    double x0 = oracles::bisect_increasing(
        [&](double x) { return x + std::pow(x, 1.0 + alpha) - 1.0; }, 0.0, 1.0);
    pwdens::MapSpec s;
    s.family = "custom";
    s.alpha = alpha;
    s.x0 = x0;
    s.beta = 1.0 / (1.0 - x0);
    s.T1 = [alpha](double x) { return x + std::pow(x, 1.0 + alpha); };
    s.dT1 = [alpha](double x) {
        return 1.0 + (1.0 + alpha) * std::pow(x, alpha);
    };
    s.ddT1 = [alpha](double x) {
        return alpha * (1.0 + alpha) * std::pow(x, alpha - 1.0);
    };
    s.T2 = [x0](double x) { return (1.0 - x) / (1.0 - x0); };
    s.dT2 = [x0](double) { return -1.0 / (1.0 - x0); };
    s.ddT2 = [](double) { return 0.0; };
    s.delta0 = [](double) { return 0.0; };
    s.delta1 = [](double) { return 0.0; };
    s.D = pwdens::estimate_induced_distortion(s, 64, 6);
    return s;
}

} // namespace test_maps

#endif
