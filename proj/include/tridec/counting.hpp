#pragma once

#include <cstdint>
#include <vector>

#include "tridec/rng.hpp"

namespace tridec {

// Exact number of triangle decompositions of K_n (labeled Steiner triple
// systems) by backtracking on the lexicographically least uncovered edge.
// Returns 0 immediately unless n == 1,3 mod 6. n <= 9 unconditionally;
// n == 13 only with allow_large (symmetry-reduced, minutes of runtime).
// Parallel over first-level branches; _serial is the reference version.
std::uint64_t brute_force_count_sts(int n, bool allow_large = false);
std::uint64_t brute_force_count_sts_serial(int n, bool allow_large = false);

// Independent oracle: exact cover of the edge set of K_n by triangles,
// counted with Algorithm X on dancing links.
std::uint64_t exact_cover_count_sts(int n);

struct CountEstimate {
    int n = 0;
    int trials = 0;
    long double l1 = 0;             // mean over trials of sum log choices
    long double l2 = 0;             // sum log(p(i) n^2 / 6) over the same steps
    long double log_sts_lower = 0;  // l1 - l2
    long double wilson_prediction = 0; // (n^2/6)(log n - 2)
    long double sum_log_p = 0;         // sum log p(i) over the idealized full process
    long double sum_log_p_target = 0;  // -n^2/6 (the integral approximation)
    long double l1_cv = 0;             // coefficient of variation across trials
    std::vector<long double> trial_l1;
};

// Monte-Carlo lower-bound estimator for log STS(n): triangle removal on K_n
// down to ~n^stop_exponent edges, accumulating observed log choice counts
// (L1) against the per-step overcount bound log(p(i) n^2/6) (L2), with
// p(i) = 1 - 6i/n^2. Trials that abort early are discarded and rerun.
CountEstimate estimate_log_sts(int n, double stop_exponent, int trials, Rng& rng);

// Necessary divisibility conditions for an (n,q,r,lambda) design:
// C(q-i, r-i) divides lambda * C(n-i, r-i) for 0 <= i < r.
bool design_divisibility(std::int64_t n, std::int64_t q, std::int64_t r,
                         std::int64_t lambda);

// log of lambda!^{-C(n,r)} ((lambda/e)^{Q-1} N)^{lambda C(n,r)/Q} with
// Q = C(q,r), N = C(n-r, q-r). Throws if divisibility fails.
long double wilson_design_log_formula(std::int64_t n, std::int64_t q,
                                      std::int64_t r, std::int64_t lambda);

// Closed form of the integral of t^{A-1} log(C t^B) over [0,1]:
// A^{-1} log C - A^{-2} B. Preconditions: A > 0, C > 0.
double entropy_integral(double a, double b, double c);

} // namespace tridec
