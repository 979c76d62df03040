#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/hole.hpp"
#include "tridec/templ.hpp"

#include <set>

using namespace tridec;

namespace {

IntGraph sum_walks(const std::vector<SignedWalk>& ws, int n) {
    IntGraph acc(n);
    for (const SignedWalk& w : ws) acc = acc + w.to_intgraph(n);
    return acc;
}

IntGraph sum_cycles(const std::vector<SignedFourCycle>& cs, int n) {
    IntGraph acc(n);
    for (const SignedFourCycle& c : cs) acc = acc + c.to_intgraph(n);
    return acc;
}

// Random vertex-balanced signed edge vector: a sum of signed four-cycles.
IntGraph random_balanced(int n, int cycles, Rng& rng) {
    IntGraph j(n);
    for (int i = 0; i < cycles; ++i) {
        std::set<int> vs;
        while (vs.size() < 4) vs.insert(int(rng.below(n)));
        std::vector<int> v(vs.begin(), vs.end());
        // Random order.
        for (int k = 3; k > 0; --k) std::swap(v[std::size_t(k)], v[rng.below(std::uint64_t(k) + 1)]);
        SignedFourCycle c{{v[0], v[1], v[2], v[3]}, rng.below(2) ? 1 : -1};
        j = j + c.to_intgraph(n);
    }
    return j;
}

} // namespace

TEST_CASE("signed walk and four-cycle edge vectors") {
    SignedWalk w{{0, 1, 2, 3}, 1};
    const IntGraph jw = w.to_intgraph(5);
    CHECK(jw.get(Edge::make(0, 1)) == 1);
    CHECK(jw.get(Edge::make(1, 2)) == -1);
    CHECK(jw.get(Edge::make(2, 3)) == 1);
    CHECK(jw.get(Edge::make(3, 0)) == -1);
    for (std::int64_t s : boundary1(jw)) CHECK(s == 0);

    SignedFourCycle c{{4, 1, 3, 0}, -1};
    const IntGraph jc = c.to_intgraph(5);
    CHECK(jc.get(Edge::make(4, 1)) == -1);
    CHECK(jc.get(Edge::make(1, 3)) == 1);
    CHECK(jc.get(Edge::make(3, 0)) == -1);
    CHECK(jc.get(Edge::make(0, 4)) == 1);
}

TEST_CASE("extract_signed_walks: exact decomposition without cancellation") {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 8 + int(rng.below(20));
        const IntGraph j = random_balanced(n, 1 + int(rng.below(8)), rng);
        const auto ws = extract_signed_walks(j);
        CHECK(sum_walks(ws, n) == j);
        // No cancellation: every walk edge carries the sign it has in j.
        for (const SignedWalk& w : ws) {
            CHECK(w.length() >= 4);
            CHECK(w.length() % 2 == 0);
            int sign = w.first_sign;
            for (int i = 0; i < w.length(); ++i) {
                const Edge e = Edge::make(w.verts[std::size_t(i)],
                                          w.verts[std::size_t((i + 1) % w.length())]);
                CHECK(j.get(e) * sign > 0);
                sign = -sign;
            }
        }
    }
    CHECK(extract_signed_walks(IntGraph(5)).empty());
}

TEST_CASE("extract_signed_walks rejects unbalanced input") {
    IntGraph j(4);
    j.addw(Edge::make(0, 1), 1);
    CHECK_THROWS(extract_signed_walks(j));
}

TEST_CASE("walk_to_four_cycles reproduces the walk exactly") {
    Rng rng(2);
    // Random closed alternating walks assembled from four-cycle sums, then
    // re-extracted so they are genuine walks.
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 8 + int(rng.below(15));
        const IntGraph j = random_balanced(n, 1 + int(rng.below(6)), rng);
        for (const SignedWalk& w : extract_signed_walks(j)) {
            const auto cycles = walk_to_four_cycles(w);
            CHECK(std::int64_t(cycles.size()) == w.length() / 2 - 1);
            CHECK(sum_cycles(cycles, n) == w.to_intgraph(n));
        }
    }
}

TEST_CASE("walk_to_four_cycles handles repeated-vertex walks") {
    // Walk visiting vertex 2 twice: 0-1-2-3-4-2-5-6 closed (length 8).
    SignedWalk w{{0, 1, 2, 3, 4, 2, 5, 6}, 1};
    const auto cycles = walk_to_four_cycles(w);
    CHECK(sum_cycles(cycles, 8) == w.to_intgraph(8));

    // Degenerate chain positions x_i == y_i (w_i == w_{2m+1-i}): vertex 1
    // mirrored across the walk.
    SignedWalk w2{{0, 1, 2, 3, 4, 1, 5, 6}, -1};
    const auto cycles2 = walk_to_four_cycles(w2);
    CHECK(sum_cycles(cycles2, 8) == w2.to_intgraph(8));
}

TEST_CASE("integral_relaxation: boundary is exact") {
    Rng rng(3);

    SUBCASE("zero input") {
        const TriangleVec phi = integral_relaxation(IntGraph(10), 10, rng);
        CHECK(boundary2(phi).is_zero());
    }

    SUBCASE("single triangle boundary") {
        TriangleVec t(12);
        t.addw(Triple::make(2, 5, 9), 1);
        const IntGraph s = boundary2(t);
        const TriangleVec phi = integral_relaxation(s, 12, rng);
        CHECK(boundary2(phi) == s);
    }

    SUBCASE("random tridivisible targets") {
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 12 + int(rng.below(20));
            TriangleVec psi(n);
            for (int i = 0; i < 6; ++i) {
                int a = int(rng.below(n)), b = int(rng.below(n)), c = int(rng.below(n));
                if (a == b || b == c || a == c) continue;
                psi.addw(Triple::make(a, b, c), rng.below(2) ? 1 : -1);
            }
            const IntGraph s = boundary2(psi); // automatically tridivisible
            const TriangleVec phi = integral_relaxation(s, n, rng);
            CHECK(boundary2(phi) == s);
        }
    }

    SUBCASE("non-tridivisible input throws") {
        IntGraph s(6);
        s.addw(Edge::make(0, 1), 1);
        s.addw(Edge::make(2, 3), 1);
        s.addw(Edge::make(4, 5), 1); // sum 3 but odd vertex sums
        CHECK_THROWS(integral_relaxation(s, 6, rng));
    }
}

TEST_CASE("octahedral_eliminate_hole on a dense instance") {
    const Graph g = Graph::complete(31);
    Rng trng(4);
    const Template tpl = build_template(g, TemplateMode::dense, trng);

    // Phi: two vertex-disjoint positive triangles taken from the template,
    // so s = boundary2(Phi) is a 0/1 vector inside Gstar.
    TriangleVec phi(31);
    const Triple t1 = tpl.T.tris[0];
    Triple t2{};
    for (const Triple& t : tpl.T.tris) {
        std::set<int> vs{t1.a, t1.b, t1.c};
        if (!vs.count(t.a) && !vs.count(t.b) && !vs.count(t.c)) {
            t2 = t;
            break;
        }
    }
    phi.addw(t1, 1);
    phi.addw(t2, 1);
    const IntGraph s = boundary2(phi);

    Rng rng(5);
    HoleConfig cfg;
    const HoleResult res = octahedral_eliminate_hole(phi, tpl.Gstar, cfg, rng);

    CHECK(res.Mo.validate_edge_disjoint());
    CHECK(res.Mi.validate_edge_disjoint());
    for (const Triple& t : res.Mo.tris)
        for (Edge e : t.edges()) CHECK(tpl.Gstar.has(e));
    for (const Triple& t : res.Mi.tris)
        for (Edge e : t.edges()) CHECK(tpl.Gstar.has(e));

    // boundary2(Mo - Mi) == s and (s, UMi) partitions UMo.
    CHECK(boundary2(res.Mo.indicator(31) - res.Mi.indicator(31)) == s);
    IntGraph cover = res.Mi.edge_indicator(31);
    for (const auto& [k, wt] : s.w) cover.addw(Edge::from_key(k), wt);
    CHECK(cover == res.Mo.edge_indicator(31));

    // New edges recorded in Gamma/GammaPrime are inside Gstar and avoid s.
    res.Gamma.for_each_edge([&](Edge e) {
        CHECK(tpl.Gstar.has(e));
        CHECK(s.get(e) == 0);
    });
    res.GammaPrime.for_each_edge([&](Edge e) { CHECK(tpl.Gstar.has(e)); });
}
