#include "tridec/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tridec/graph.hpp"
#include "tridec/greedy.hpp"

namespace tridec {

namespace {

// Adjacency-style bitmask state for tiny complete graphs (n <= 15):
// avail[v] has bit w set iff edge vw is still uncovered.
using Avail = std::array<std::uint16_t, 16>;

// Counts triangle covers extending the current state. Each cover is hit
// exactly once because the branching edge (the lexicographically least
// uncovered one) is forced.
std::uint64_t cover_count(Avail& avail, int n) {
    int u = -1, v = -1;
    for (int i = 0; i < n && u < 0; ++i) {
        const std::uint16_t above = avail[i] >> (i + 1);
        if (above) {
            u = i;
            v = i + 1 + __builtin_ctz(above);
        }
    }
    if (u < 0) return 1; // everything covered
    std::uint64_t total = 0;
    std::uint16_t cand = avail[u] & avail[v];
    while (cand) {
        const int w = __builtin_ctz(cand);
        cand &= cand - 1;
        avail[u] ^= std::uint16_t((1u << v) | (1u << w));
        avail[v] ^= std::uint16_t((1u << u) | (1u << w));
        avail[w] ^= std::uint16_t((1u << u) | (1u << v));
        total += cover_count(avail, n);
        avail[u] ^= std::uint16_t((1u << v) | (1u << w));
        avail[v] ^= std::uint16_t((1u << u) | (1u << w));
        avail[w] ^= std::uint16_t((1u << u) | (1u << v));
    }
    return total;
}

void apply_triple(Avail& avail, int a, int b, int c) {
    avail[a] &= std::uint16_t(~((1u << b) | (1u << c)));
    avail[b] &= std::uint16_t(~((1u << a) | (1u << c)));
    avail[c] &= std::uint16_t(~((1u << a) | (1u << b)));
}

Avail initial_avail(int n) {
    Avail avail{};
    for (int v = 0; v < n; ++v)
        avail[v] = std::uint16_t(((1u << n) - 1u) & ~(1u << v));
    return avail;
}

std::uint64_t count_sts_impl(int n, bool allow_large, bool parallel) {
    if (n < 1) throw std::invalid_argument("count_sts: n must be positive");
    if (n % 6 != 1 && n % 6 != 3) return 0;
    if (n == 1) return 1;
    if (n > 13 || (n == 13 && !allow_large))
        throw std::invalid_argument("count_sts: n too large for exhaustive count");

    Avail avail = initial_avail(n);
    std::uint64_t scale = 1;
    if (n == 13) {
        // Fix the six triples through vertex 0 to the canonical perfect
        // matching {1,2},{3,4},...,{11,12}; relabelings of {1..12} act
        // transitively on the 11!! = 10395 matchings and preserve the count.
        for (int k = 0; k < 6; ++k) apply_triple(avail, 0, 2 * k + 1, 2 * k + 2);
        scale = 10395;
    }

    if (!parallel) return scale * cover_count(avail, n);

    // Parallel over the first branching level.
    int u = -1, v = -1;
    for (int i = 0; i < n && u < 0; ++i) {
        const std::uint16_t above = avail[i] >> (i + 1);
        if (above) {
            u = i;
            v = i + 1 + __builtin_ctz(above);
        }
    }
    if (u < 0) return scale;
    std::vector<int> ws;
    std::uint16_t cand = avail[u] & avail[v];
    while (cand) {
        ws.push_back(__builtin_ctz(cand));
        cand &= cand - 1;
    }
    std::uint64_t total = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : total)
    for (int k = 0; k < static_cast<int>(ws.size()); ++k) {
        Avail local = avail;
        apply_triple(local, u, v, ws[k]);
        total += cover_count(local, n);
    }
    return scale * total;
}

} // namespace

std::uint64_t brute_force_count_sts(int n, bool allow_large) {
    return count_sts_impl(n, allow_large, true);
}

std::uint64_t brute_force_count_sts_serial(int n, bool allow_large) {
    return count_sts_impl(n, allow_large, false);
}

namespace {

// Dancing-links exact cover (Algorithm X), counting solutions only.
struct Dlx {
    // Node arrays: 0..ncols are column headers (0 = root).
    std::vector<int> left, right, up, down, col;
    std::vector<int> size_; // per column
    std::uint64_t solutions = 0;

    explicit Dlx(int ncols) {
        left.resize(ncols + 1);
        right.resize(ncols + 1);
        up.resize(ncols + 1);
        down.resize(ncols + 1);
        col.resize(ncols + 1);
        size_.assign(ncols + 1, 0);
        for (int i = 0; i <= ncols; ++i) {
            left[i] = (i + ncols) % (ncols + 1);
            right[i] = (i + 1) % (ncols + 1);
            up[i] = down[i] = i;
            col[i] = i;
        }
    }

    void add_row(const std::vector<int>& cols) {
        const int first = static_cast<int>(left.size());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const int c = cols[k];
            const int node = static_cast<int>(left.size());
            left.push_back(node);
            right.push_back(node);
            up.push_back(up[c]);
            down.push_back(c);
            col.push_back(c);
            down[up[c]] = node;
            up[c] = node;
            ++size_[c];
            if (k > 0) {
                left[node] = node - 1;
                right[node] = first;
                right[node - 1] = node;
                left[first] = node;
            }
        }
    }

    void cover(int c) {
        left[right[c]] = left[c];
        right[left[c]] = right[c];
        for (int i = down[c]; i != c; i = down[i])
            for (int j = right[i]; j != i; j = right[j]) {
                up[down[j]] = up[j];
                down[up[j]] = down[j];
                --size_[col[j]];
            }
    }

    void uncover(int c) {
        for (int i = up[c]; i != c; i = up[i])
            for (int j = left[i]; j != i; j = left[j]) {
                ++size_[col[j]];
                up[down[j]] = j;
                down[up[j]] = j;
            }
        left[right[c]] = c;
        right[left[c]] = c;
    }

    void search() {
        if (right[0] == 0) {
            ++solutions;
            return;
        }
        int c = right[0];
        for (int j = right[0]; j != 0; j = right[j])
            if (size_[j] < size_[c]) c = j;
        cover(c);
        for (int r = down[c]; r != c; r = down[r]) {
            for (int j = right[r]; j != r; j = right[j]) cover(col[j]);
            search();
            for (int j = left[r]; j != r; j = left[j]) uncover(col[j]);
        }
        uncover(c);
    }
};

} // namespace

std::uint64_t exact_cover_count_sts(int n) {
    if (n < 1) throw std::invalid_argument("exact_cover_count_sts: n must be positive");
    if (n % 6 != 1 && n % 6 != 3) return 0;
    if (n == 1) return 1;
    if (n > 9)
        throw std::invalid_argument("exact_cover_count_sts: n too large");
    // Columns 1..C(n,2): one per edge of K_n.
    std::vector<std::vector<int>> eid(n, std::vector<int>(n, 0));
    int ncols = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) eid[u][v] = ++ncols;
    Dlx dlx(ncols);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                dlx.add_row({eid[a][b], eid[a][c], eid[b][c]});
    dlx.search();
    return dlx.solutions;
}

CountEstimate estimate_log_sts(int n, double stop_exponent, int trials, Rng& rng) {
    if (n < 7 || trials < 1)
        throw std::invalid_argument("estimate_log_sts: need n >= 7, trials >= 1");
    CountEstimate est;
    est.n = n;
    est.trials = trials;
    const Graph kn = Graph::complete(n);
    const std::int64_t m0 = kn.edge_count();
    std::int64_t stop = static_cast<std::int64_t>(
        std::llround(std::pow(static_cast<double>(n), stop_exponent)));
    stop = std::min(stop, m0);
    while ((m0 - stop) % 3 != 0) --stop; // keep |K_n| - stop a triangle count
    const std::int64_t steps = (m0 - stop) / 3;

    // Per-step overcount bound is trial-independent: L2 = sum log(p(i) n^2/6)
    // over the performed steps, with p(i) = 1 - 6i/n^2.
    const long double nn6 = static_cast<long double>(n) * n / 6.0L;
    for (std::int64_t i = 1; i <= steps; ++i) {
        const long double p = 1.0L - 6.0L * i / (static_cast<long double>(n) * n);
        est.l2 += std::log(p * nn6);
    }
    // Idealized full process (all floor(n^2/6) steps): sum log p(i) should
    // track (n^2/6) * integral_0^1 log p dp = -n^2/6.
    for (std::int64_t i = 1; i <= static_cast<std::int64_t>(n) * n / 6; ++i) {
        const long double p = 1.0L - 6.0L * i / (static_cast<long double>(n) * n);
        if (p > 0) est.sum_log_p += std::log(p);
    }
    est.sum_log_p_target = -nn6;
    est.wilson_prediction = nn6 * (std::log(static_cast<long double>(n)) - 2.0L);

    RemovalOptions opts;
    opts.record_steps = false;
    opts.checkpoints = {};
    opts.te_sample_count = 0;

    const std::uint64_t base = rng.next();
    int done = 0;
    for (std::uint64_t attempt = 0; done < trials; ++attempt) {
        if (attempt > static_cast<std::uint64_t>(trials) * 50 + 100)
            throw std::runtime_error("estimate_log_sts: too many aborted trials");
        Rng trial_rng(derive_seed(base, "sts-estimate", attempt));
        RemovalResult res = run_triangle_removal(kn, stop, trial_rng, opts);
        if (res.trajectory.aborted) continue; // discard and rerun
        est.trial_l1.push_back(res.trajectory.log_choice_sum);
        ++done;
    }
    est.l1 = std::accumulate(est.trial_l1.begin(), est.trial_l1.end(), 0.0L) / trials;
    if (trials > 1) {
        long double var = 0;
        for (long double x : est.trial_l1) var += (x - est.l1) * (x - est.l1);
        var /= trials - 1;
        est.l1_cv = std::sqrt(var) / est.l1;
    }
    est.log_sts_lower = est.l1 - est.l2;
    return est;
}

namespace {

// Exact binomial coefficient; throws on overflow (inputs here are small).
std::uint64_t binom_exact(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
        if (r > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("binom_exact: overflow");
    }
    return static_cast<std::uint64_t>(r);
}

long double log_binom(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -INFINITY;
    return std::lgammal(static_cast<long double>(n + 1)) -
           std::lgammal(static_cast<long double>(k + 1)) -
           std::lgammal(static_cast<long double>(n - k + 1));
}

} // namespace

bool design_divisibility(std::int64_t n, std::int64_t q, std::int64_t r,
                         std::int64_t lambda) {
    if (!(0 < r && r <= q && q <= n && lambda > 0))
        throw std::invalid_argument("design_divisibility: need 0 < r <= q <= n, lambda > 0");
    for (std::int64_t i = 0; i < r; ++i) {
        const std::uint64_t den = binom_exact(q - i, r - i);
        const unsigned __int128 num =
            static_cast<unsigned __int128>(lambda) * binom_exact(n - i, r - i);
        if (num % den != 0) return false;
    }
    return true;
}

long double wilson_design_log_formula(std::int64_t n, std::int64_t q,
                                      std::int64_t r, std::int64_t lambda) {
    if (!design_divisibility(n, q, r, lambda))
        throw std::invalid_argument("wilson_design_log_formula: divisibility fails");
    const long double cnr = std::exp(log_binom(n, r));
    const long double bigq = static_cast<long double>(binom_exact(q, r));
    const long double logn_blocks = log_binom(n - r, q - r);
    const long double ll = static_cast<long double>(lambda);
    const long double log_lambda_fact = std::lgammal(ll + 1.0L);
    return -cnr * log_lambda_fact +
           (ll * cnr / bigq) * ((bigq - 1.0L) * (std::log(ll) - 1.0L) + logn_blocks);
}

double entropy_integral(double a, double b, double c) {
    if (a <= 0.0 || c <= 0.0)
        throw std::invalid_argument("entropy_integral: need a > 0, c > 0");
    return std::log(c) / a - b / (a * a);
}

} // namespace tridec
