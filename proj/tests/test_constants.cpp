#include "pwdens/constants.hpp"

#include "support/test_maps.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace pwdens;

namespace {

bool bits_equal(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

TEST_CASE("hand-derived constants at alpha = 1/2")
{
    MapSpec s = canonical_lsv(0.5);
    ConstantsBundle b = compute_constants(s, 1.0, 1.0);

    CHECK(b.C1 == doctest::Approx(36.0).epsilon(1e-12));   // (2(4-1))^2
    CHECK(b.C0 == doctest::Approx(0.75).epsilon(1e-12));   // 0.375 (1+d0)^2, d0 = sqrt2-1
    CHECK(b.d == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(b.d1 == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
    CHECK(eta_k(b, 1) == doctest::Approx(1.5).epsilon(1e-12));

    // log M = 1.5 ln 36 + 2*0.75*36 - ln 2
    double log_m = 1.5 * std::log(36.0) + 54.0 - std::log(2.0);
    CHECK(b.log_M == doctest::Approx(log_m).epsilon(1e-9));
    CHECK(b.log_M == doctest::Approx(58.68213122712422).epsilon(1e-9));
    CHECK(b.M == doctest::Approx(std::exp(log_m)).epsilon(1e-9));

    // C2 = sqrt(2) * 8 * 27
    CHECK(b.C2 == doctest::Approx(std::sqrt(2.0) * 216.0).epsilon(1e-12));
    CHECK(b.gamma == 0.5);
    // C3 = 1/2 + C2 * (0.5 + 1.5/0.5)
    CHECK(b.C3 == doctest::Approx(0.5 + b.C2 * 3.5).epsilon(1e-12));
    // C4 = 1 + C3 (C_LY/(1-gamma) + 1/|Delta|) with C_LY = 1
    CHECK(b.C4 == doctest::Approx(1.0 + b.C3 * 4.0).epsilon(1e-12));

    // C* in linear form is still representable here; cross-check the log form
    double direct = 1.0 * (1.0 + std::pow(0.5, 1.5) / 2.0 + b.M * 1.5) * b.C4;
    CHECK(std::exp(b.log_Cstar) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(b.Cstar == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("bundle recomputation bit-agrees")
{
    MapSpec s = canonical_lsv(0.37);
    ConstantsBundle a = compute_constants(s, 2.5, 3.0);
    ConstantsBundle b = compute_constants(s, 2.5, 3.0);
    CHECK(bits_equal(a.C0, b.C0));
    CHECK(bits_equal(a.C1, b.C1));
    CHECK(bits_equal(a.C2, b.C2));
    CHECK(bits_equal(a.C3, b.C3));
    CHECK(bits_equal(a.C4, b.C4));
    CHECK(bits_equal(a.log_M, b.log_M));
    CHECK(bits_equal(a.log_Cstar, b.log_Cstar));
    CHECK(bits_equal(a.d, b.d));
}

TEST_CASE("eta_k behaviour")
{
    ConstantsBundle b = compute_constants(canonical_lsv(0.5), 1.0);
    double prev = 1.0;
    for (int k = 1; k <= 64; ++k) {
        double e = eta_k(b, k);
        CHECK(e > 1.0);
        CHECK(e > prev);
        prev = e;
    }
    CHECK(eta_k(b, 1000000000) == doctest::Approx(b.d).epsilon(1e-6));
    CHECK(eta_k(b, 2) == doctest::Approx(3.0 * 4.0 / 7.0).epsilon(1e-12));

    ConstantsBundle nc = compute_constants(test_maps::decreasing_t2_map(0.5), 1.0);
    CHECK_THROWS_AS(eta_k(nc, 1), std::invalid_argument);
}

TEST_CASE("G_n bound")
{
    ConstantsBundle b = compute_constants(canonical_lsv(0.5), 1.0);
    CHECK(G_n_bound(b, 1) ==
          doctest::Approx(0.17677669529663689).epsilon(1e-12));
    CHECK(G_n_bound(b, 2) == doctest::Approx(b.M).epsilon(1e-12));
    // power-law ratio tends to 2^{1+1/alpha} = 8
    double r = G_n_bound_log(b, 1000000) - G_n_bound_log(b, 2000000);
    CHECK(std::exp(r) == doctest::Approx(8.0).epsilon(1e-4));
    CHECK_THROWS_AS(G_n_bound(b, 0), std::invalid_argument);
}

TEST_CASE("tail of n * lambda-hat(Z_n)")
{
    ConstantsBundle b = compute_constants(canonical_lsv(0.5), 1.0);
    CHECK(sum_tail_n_lambda(b, 0) == b.C3);
    // alpha = 1/2: pref (N+1)/N (N^{-2} + N^{-1}) at N = 100
    double expect = b.C2 / (2.0 * 0.5) * 1.01 * (1e-4 + 1e-2);
    CHECK(sum_tail_n_lambda(b, 100) == doctest::Approx(expect).epsilon(1e-12));
    double prev = sum_tail_n_lambda(b, 1);
    for (long N : {2L, 8L, 64L, 1024L, 1000000L}) {
        double v = sum_tail_n_lambda(b, N);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(sum_tail_n_lambda(b, 4000000000000L) < 1e-10);
}

TEST_CASE("one-step expansion inequality holds on a grid")
{
    // [1 + xi]^{1+a} <= 1 + (1+a) xi + a(1+a)/2 xi^2 with xi = x^a (1 + d0)
    for (double alpha : {0.3, 0.5, 0.7}) {
        MapSpec s = canonical_lsv(alpha);
        for (int i = 1; i <= 1000; ++i) {
            double x = s.x0 * i / 1001.0;
            double xi = std::pow(x, alpha) * (1.0 + s.delta0(x));
            double lhs = std::pow(1.0 + xi, 1.0 + alpha);
            double rhs = 1.0 + (1.0 + alpha) * xi +
                         0.5 * alpha * (1.0 + alpha) * xi * xi;
            CHECK(lhs <= rhs * (1.0 + 1e-13));
        }
    }
}

TEST_CASE("g(x) <= 1 + C0 x^{2a} on a grid")
{
    for (double alpha : {0.3, 0.5, 0.7}) {
        MapSpec s = canonical_lsv(alpha);
        ConstantsBundle b = compute_constants(s, 1.0);
        for (int i = 1; i <= 1000; ++i) {
            double x = s.x0 * i / 1001.0;
            double g = std::pow(s.T1(x) / x, 1.0 + alpha) / s.dT1(x);
            CHECK(g <= 1.0 + b.C0 * std::pow(x, 2.0 * alpha) + 1e-13);
        }
    }
}

TEST_CASE("empirical Lasota-Yorke verification")
{
    MapSpec s = canonical_lsv(0.5);
    InducedMap ind = build_induced(s, 1500);
    ConstantsBundle b = compute_constants(s, 1.0);

    LasotaYorkeReport rep =
        verify_lasota_yorke(ind, b.gamma, b.C_LY, 40, 123, 1200, 800);
    CHECK(rep.pass);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin <= 0.0);

    // negative control: an absurd budget must be caught
    LasotaYorkeReport bad =
        verify_lasota_yorke(ind, 0.01, 1e-9, 10, 123, 1200, 800);
    CHECK(!bad.pass);
}

TEST_CASE("default C_LY is twice the distortion estimate")
{
    MapSpec s = canonical_lsv(0.5);
    ConstantsBundle b = compute_constants(s, 1.0);
    CHECK(b.C_LY == doctest::Approx(2.0 * s.D).epsilon(1e-14));
    ConstantsBundle c = compute_constants(s, 1.0, 7.5);
    CHECK(c.C_LY == 7.5);
    CHECK_THROWS_AS(compute_constants(s, 0.0), std::invalid_argument);
}
