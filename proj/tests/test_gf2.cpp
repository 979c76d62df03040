#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/gf2.hpp"
#include "tridec/rng.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace tridec;

namespace {

bool satisfies(const AffineSystem& sys, const std::vector<FieldElem>& y) {
    for (const AffineRow& row : sys.rows) {
        FieldElem acc = 0;
        for (int i = 0; i < sys.num_unknowns; ++i)
            if (row.coeffs >> i & 1u) acc ^= y[static_cast<std::size_t>(i)];
        if (acc != row.rhs) return false;
    }
    return true;
}

// Exhaustive oracle: all (2^a)^g assignments satisfying the system.
std::set<std::vector<FieldElem>> all_solutions(const AffineSystem& sys, int a) {
    std::set<std::vector<FieldElem>> out;
    const int g = sys.num_unknowns;
    const std::uint64_t total = 1ull << (a * g);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<FieldElem> y(static_cast<std::size_t>(g));
        for (int i = 0; i < g; ++i)
            y[static_cast<std::size_t>(i)] =
                static_cast<FieldElem>(code >> (a * i)) & ((1u << a) - 1u);
        if (satisfies(sys, y)) out.insert(y);
    }
    return out;
}

} // namespace

TEST_CASE("gf2_rank on explicit examples") {
    CHECK(gf2_rank({}) == 0);
    CHECK(gf2_rank({0}) == 0);
    CHECK(gf2_rank({1}) == 1);
    CHECK(gf2_rank({1, 2, 3}) == 2);        // 3 = 1 ^ 2
    CHECK(gf2_rank({1, 2, 4, 7}) == 3);      // 7 in span of the others
    CHECK(gf2_rank({5, 6, 3}) == 2);         // 5 ^ 6 == 3
    CHECK(is_independent({1, 2, 4}));
    CHECK_FALSE(is_independent({1, 2, 3}));
    CHECK_FALSE(is_independent({0}));
}

TEST_CASE("span enumerates exactly the XOR-closure") {
    const auto s = span({5, 6});
    CHECK(s == std::vector<FieldElem>{0, 3, 5, 6});
    CHECK(span({}) == std::vector<FieldElem>{0});
    // |span| == 2^rank and closure under XOR, on random inputs.
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<FieldElem> elems;
        for (int i = 0; i < 5; ++i) elems.push_back(static_cast<FieldElem>(rng.below(64)));
        const auto sp = span(elems);
        CHECK(sp.size() == (1u << gf2_rank(elems)));
        CHECK(std::is_sorted(sp.begin(), sp.end()));
        std::set<FieldElem> inset(sp.begin(), sp.end());
        for (FieldElem u : sp)
            for (FieldElem v : sp) CHECK(inset.count(u ^ v) == 1);
    }
}

TEST_CASE("solve_affine_system matches exhaustive enumeration") {
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const int a = 1 + static_cast<int>(rng.below(3));      // field width 1..3
        const int g = 1 + static_cast<int>(rng.below(3));      // 1..3 unknowns
        const int nrows = static_cast<int>(rng.below(5));      // 0..4 rows
        AffineSystem sys;
        sys.num_unknowns = g;
        for (int r = 0; r < nrows; ++r) {
            AffineRow row;
            row.coeffs = static_cast<std::uint32_t>(rng.below(1u << g));
            row.rhs = static_cast<FieldElem>(rng.below(1u << a));
            sys.rows.push_back(row);
        }

        const auto oracle = all_solutions(sys, a);
        const AffineSolution sol = solve_affine_system(sys);

        CHECK(sol.consistent == !oracle.empty());
        CHECK(sol.count(a) == oracle.size());
        if (!sol.consistent) continue;

        CHECK(satisfies(sys, sol.particular));
        CHECK(sol.nullity == static_cast<int>(sol.homogeneous.size()));

        // for_each_solution visits each oracle solution exactly once.
        std::set<std::vector<FieldElem>> visited;
        for_each_solution(sol, a, [&](const std::vector<FieldElem>& y) {
            CHECK(visited.insert(y).second);
            return true;
        });
        CHECK(visited == oracle);
    }
}

TEST_CASE("for_each_solution stops early when the visitor returns false") {
    AffineSystem sys;
    sys.num_unknowns = 2; // no rows: all assignments are solutions
    const AffineSolution sol = solve_affine_system(sys);
    REQUIRE(sol.consistent);
    CHECK(sol.count(3) == 64);
    int seen = 0;
    for_each_solution(sol, 3, [&](const std::vector<FieldElem>&) {
        return ++seen < 10;
    });
    CHECK(seen == 10);
}

TEST_CASE("saturating count") {
    AffineSystem sys;
    sys.num_unknowns = 8; // nullity 8 with no rows
    const AffineSolution sol = solve_affine_system(sys);
    REQUIRE(sol.consistent);
    CHECK(sol.count(7) == (1ull << 56));
    CHECK(sol.count(8) == UINT64_MAX); // 2^64 saturates
}
