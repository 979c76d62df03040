#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/counting.hpp"

#include <cmath>

using namespace tridec;

TEST_CASE("Steiner triple system counts (labeled)") {
    CHECK(brute_force_count_sts(1) == 1);
    CHECK(brute_force_count_sts(3) == 1);
    CHECK(brute_force_count_sts(7) == 30);
    CHECK(brute_force_count_sts(9) == 840);
    CHECK(brute_force_count_sts_serial(7) == 30);
    CHECK(brute_force_count_sts_serial(9) == 840);
    for (int n : {2, 4, 5, 6, 8, 10, 11, 12}) CHECK(brute_force_count_sts(n) == 0);
    CHECK_THROWS_AS(brute_force_count_sts(0), std::invalid_argument);
}

TEST_CASE("exact-cover oracle agrees with backtracking") {
    CHECK(exact_cover_count_sts(1) == 1);
    CHECK(exact_cover_count_sts(3) == 1);
    CHECK(exact_cover_count_sts(7) == 30);
    CHECK(exact_cover_count_sts(9) == 840);
}

TEST_CASE("n = 13 needs the explicit opt-in") {
    CHECK_THROWS_AS(brute_force_count_sts(13), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_count_sts(15, true), std::invalid_argument);
}

TEST_CASE("design divisibility conditions") {
    CHECK(design_divisibility(7, 3, 2, 1));
    CHECK_FALSE(design_divisibility(8, 3, 2, 1));
    // For Steiner triple systems the condition is n mod 6 in {1, 3}.
    for (int n = 3; n <= 100; ++n)
        CHECK(design_divisibility(n, 3, 2, 1) == (n % 6 == 1 || n % 6 == 3));
    // S(2, 4, n) requires n mod 12 in {1, 4}.
    for (int n = 4; n <= 100; ++n)
        CHECK(design_divisibility(n, 4, 2, 1) == (n % 12 == 1 || n % 12 == 4));
    // lambda = 2 relaxes the triple-system condition to n mod 3 in {0, 1}.
    for (int n = 3; n <= 60; ++n)
        CHECK(design_divisibility(n, 3, 2, 2) == (n % 3 != 2));
}

TEST_CASE("general design count formula reduces to the triple-system form") {
    for (int n : {99, 999, 9999}) {
        const long double got = wilson_design_log_formula(n, 3, 2, 1);
        const long double want =
            (static_cast<long double>(n) * n / 6.0L) * (std::log((long double)n) - 2.0L);
        CHECK(std::abs((double)(got / want - 1.0L)) < 0.05);
    }
}

TEST_CASE("entropy integral against numerical quadrature") {
    // entropy_integral(a, b, c) = integral_0^1 t^{a-1} log(c t^b) dt; the
    // midpoint rule converges for a >= 1.5.
    const int steps = 200000;
    for (double aa : {1.5, 2.0, 4.0})
        for (double bb : {0.5, 1.0})
            for (double cc : {1.0, 2.0, 5.0}) {
                double quad = 0.0;
                for (int i = 0; i < steps; ++i) {
                    const double t = (i + 0.5) / steps;
                    quad += std::pow(t, aa - 1.0) * std::log(cc * std::pow(t, bb));
                }
                quad /= steps;
                CHECK(entropy_integral(aa, bb, cc) == doctest::Approx(quad).epsilon(1e-4));
            }
}

TEST_CASE("estimate_log_sts smoke test at n = 21") {
    Rng rng(1);
    const CountEstimate est = estimate_log_sts(21, 1.6, 3, rng);
    CHECK(est.n == 21);
    CHECK(est.trials == 3);
    CHECK(est.trial_l1.size() == 3);
    CHECK(est.l1 > 0);
    CHECK(est.log_sts_lower == doctest::Approx((double)(est.l1 - est.l2)));
    // Idealized survival-probability sum tracks -n^2/6.
    CHECK(est.sum_log_p_target == doctest::Approx(-21.0 * 21.0 / 6.0));
    CHECK(std::abs((double)(est.sum_log_p / est.sum_log_p_target - 1.0L)) < 0.05);
    CHECK(est.wilson_prediction ==
          doctest::Approx(21.0 * 21.0 / 6.0 * (std::log(21.0) - 2.0)));
    CHECK(est.l1_cv >= 0);
}

TEST_CASE("estimator determinism") {
    Rng r1(7), r2(7);
    const CountEstimate a = estimate_log_sts(15, 1.6, 2, r1);
    const CountEstimate b = estimate_log_sts(15, 1.6, 2, r2);
    CHECK(a.l1 == b.l1);
    CHECK(a.trial_l1 == b.trial_l1);
}
