#include "pwdens/inducing.hpp"

#include "pwdens/constants.hpp"

#include "support/oracles.hpp"
#include "support/test_maps.hpp"

#include <doctest.h>

#include <cmath>

using namespace pwdens;

TEST_CASE("first branches of the canonical induced map")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 4);
    CHECK(ind.accumulate_left);

    // Z_1 = T2^{-1}((x0, 1)) = (0.75, 1)
    CHECK(ind.branches[0].a == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(ind.branches[0].b == doctest::Approx(1.0).epsilon(1e-14));

    // Z_2 = ((x1+1)/2, 0.75) with x1 from the bisection oracle
    double x1 = oracles::lsv_t1_inverse(0.5, 0.5);
    CHECK(ind.branches[1].a == doctest::Approx(0.5 * (x1 + 1.0)).epsilon(1e-11));
    CHECK(ind.branches[1].a == doctest::Approx(0.64249).epsilon(1e-4));
    CHECK(ind.branches[1].b == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("branch_inverse")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 8);
    CHECK(branch_inverse(ind, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(branch_inverse(ind, 1, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
    double x1 = oracles::lsv_t1_inverse(0.5, 0.5);
    CHECK(branch_inverse(ind, 2, 0.5) ==
          doctest::Approx(0.5 * (x1 + 1.0)).epsilon(1e-11));
    CHECK_THROWS_AS(branch_inverse(ind, 9, 0.5), std::domain_error);

    // consistency: Th(branch_inverse(n, y)) = y via n forward steps of T
    for (int n = 1; n <= 8; ++n) {
        for (double y : {0.51, 0.75, 0.99}) {
            double z = branch_inverse(ind, n, y);
            double v = z;
            for (int i = 0; i < n; ++i)
                v = s.T(v);
            CHECK(v == doctest::Approx(y).epsilon(1e-9));
        }
    }
}

TEST_CASE("return times are exact")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 20);
    for (int n = 1; n <= 20; ++n) {
        const InducedBranch& br = ind.branches[static_cast<size_t>(n) - 1];
        for (double frac : {0.25, 0.5, 0.75}) {
            double z = br.a + frac * (br.b - br.a);
            double v = s.T(z);
            int steps = 1;
            while (v < s.x0 && steps < 100) {
                v = s.T(v);
                ++steps;
            }
            CHECK(steps == n);
        }
    }
}

TEST_CASE("orbit satisfies the n^{-1/alpha} envelope")
{
    for (double alpha : {0.3, 0.5, 0.7}) {
        MapSpec s = canonical_lsv(alpha);
        ConstantsBundle b = compute_constants(s, 1.0);
        InducedMap ind = build_induced(s, 10000);
        for (int n = 1; n <= 10000; ++n)
            CHECK(ind.orbit.x(n) <=
                  b.C1 * std::pow(static_cast<double>(n), -1.0 / alpha) *
                      (1.0 + 1e-12));
        // strictly decreasing, inside (0, x0]
        for (int n = 1; n <= 10000; ++n) {
            CHECK(ind.orbit.x(n) < ind.orbit.x(n - 1));
            CHECK(ind.orbit.x(n) > 0.0);
        }
    }
}

TEST_CASE("branches tile Delta")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 2000);
    double total = 0.0;
    for (int n = 1; n < ind.branch_count(); ++n) {
        const InducedBranch& cur = ind.branches[static_cast<size_t>(n) - 1];
        const InducedBranch& nxt = ind.branches[static_cast<size_t>(n)];
        CHECK(nxt.b == doctest::Approx(cur.a).epsilon(1e-13)); // adjacency
        CHECK(nxt.a < cur.a);                                  // ordering
        total += cur.len();
    }
    total += ind.branches.back().len();
    CHECK(total + ind.delta_len() * ind.tail_mass ==
          doctest::Approx(ind.delta_len()).epsilon(1e-12));

    // tail_mass bounded by the closed-form branch-tail estimate
    ConstantsBundle b = compute_constants(s, 1.0);
    double bound = sum_tail_n_lambda(b, ind.branch_count()); // >= plain tail
    CHECK(ind.tail_mass <= bound);
}

TEST_CASE("branch membership respects the half-open convention")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 50);
    for (int n = 1; n <= 50; ++n) {
        const InducedBranch& br = ind.branches[static_cast<size_t>(n) - 1];
        CHECK(branch_of(ind, br.a) == n);                  // left endpoint owned
        CHECK(branch_of(ind, 0.5 * (br.a + br.b)) == n);
        if (n > 1)
            CHECK(branch_of(ind, br.b) == n - 1);          // right endpoint owned by next
    }
    CHECK(branch_of(ind, 1.0) == 1);
    CHECK(branch_of(ind, s.x0) == 0); // uncovered tail
}

TEST_CASE("branch count for tolerance")
{
    MapSpec s = canonical_lsv(0.5);
    int b_coarse = branch_count_for_tolerance(s, 1e-4);
    int b_fine = branch_count_for_tolerance(s, 1e-6);
    CHECK(b_fine > b_coarse);
    // alpha = 1/2 tail bound ~ 152.7/B^2: expect ~1.24e4 at 1e-6
    CHECK(b_fine > 10000);
    CHECK(b_fine < 20000);
    CHECK_THROWS_AS(branch_count_for_tolerance(s, 1e-12, 100000),
                    std::runtime_error);
}

TEST_CASE("inverse orbit table")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 4);
    std::vector<double> nodes = {0.5, 0.7, 0.9, 1.0};
    auto table = inverse_orbit_table(ind, nodes, 3);
    CHECK(table[0] == nodes); // depth 1 is the identity row
    CHECK(table[1][0] ==
          doctest::Approx(oracles::lsv_t1_inverse(0.5, 0.5)).epsilon(1e-11));
    for (const auto& row : table)
        for (size_t j = 1; j < row.size(); ++j)
            CHECK(row[j] > row[j - 1]); // monotone in the node index
}

TEST_CASE("streaming sweep matches branch_inverse")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 6);
    std::vector<double> nodes = {0.5, 0.62, 0.81, 1.0};
    InverseOrbitSweep sweep(s, nodes);
    for (int n = 1; n <= 6; ++n) {
        sweep.advance();
        const auto& z = sweep.pullback();
        for (size_t j = 0; j < nodes.size(); ++j)
            CHECK(z[j] ==
                  doctest::Approx(branch_inverse(ind, n, nodes[j])).epsilon(1e-12));
    }
}

TEST_CASE("pullback sweep reproduces the chain-rule product")
{
    MapSpec s = canonical_lsv(0.5);
    double x = 0.3;
    PullbackSweep sweep(s, {x});
    for (int n = 1; n <= 30; ++n) {
        sweep.advance();
        double z = sweep.z()[0];
        CHECK(sweep.denom()[0] ==
              doctest::Approx(orbit_derivative(s, z, n)).epsilon(1e-10));
        // forward orbit of z really lands on x after n steps
        double v = z;
        for (int i = 0; i < n; ++i)
            v = s.T(v);
        CHECK(v == doctest::Approx(x).epsilon(1e-8));
    }
}

TEST_CASE("decreasing T2: branches accumulate at the right end")
{
    MapSpec s = test_maps::decreasing_t2_map(0.5);
    InducedMap ind = build_induced(s, 200);
    CHECK(!ind.accumulate_left);
    // ordering reversed: Z_1 sits at the left end of Delta
    CHECK(ind.branches[0].a == doctest::Approx(s.x0).epsilon(1e-12));
    for (int n = 1; n < 200; ++n)
        CHECK(ind.branches[static_cast<size_t>(n)].a >=
              ind.branches[static_cast<size_t>(n) - 1].a);
    double total = 0.0;
    for (const auto& br : ind.branches)
        total += br.len();
    CHECK(total + ind.delta_len() * ind.tail_mass ==
          doctest::Approx(ind.delta_len()).epsilon(1e-12));

    // return times still exact
    for (int n = 1; n <= 10; ++n) {
        const InducedBranch& br = ind.branches[static_cast<size_t>(n) - 1];
        double z = 0.5 * (br.a + br.b);
        double v = s.T(z);
        int steps = 1;
        while (v < s.x0 && steps < 100) {
            v = s.T(v);
            ++steps;
        }
        CHECK(steps == n);
    }
}
