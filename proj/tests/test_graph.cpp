#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/graph.hpp"
#include "tridec/rng.hpp"

#include <sstream>
#include <vector>

using namespace tridec;

namespace {

// O(n^3) reference triangle count.
std::int64_t triangles_oracle(const Graph& g) {
    std::int64_t t = 0;
    for (int a = 0; a < g.n(); ++a)
        for (int b = a + 1; b < g.n(); ++b) {
            if (!g.has(a, b)) continue;
            for (int c = b + 1; c < g.n(); ++c)
                if (g.has(a, c) && g.has(b, c)) ++t;
        }
    return t;
}

} // namespace

TEST_CASE("Edge and Triple canonicalization and keys") {
    CHECK(Edge::make(7, 3) == Edge::make(3, 7));
    CHECK(Edge::make(3, 7).u == 3);
    CHECK(Edge::from_key(Edge::make(3, 7).key()) == Edge::make(3, 7));

    const Triple t = Triple::make(9, 2, 5);
    CHECK(t == Triple::make(2, 5, 9));
    CHECK(t.a == 2);
    CHECK(t.b == 5);
    CHECK(t.c == 9);
    CHECK(Triple::from_key(t.key()) == t);
    CHECK(t.contains_edge(Edge::make(2, 9)));
    CHECK_FALSE(t.contains_edge(Edge::make(2, 3)));
    const auto es = t.edges();
    CHECK(es[0] == Edge::make(2, 5));
    CHECK(es[1] == Edge::make(2, 9));
    CHECK(es[2] == Edge::make(5, 9));
}

TEST_CASE("Graph add/remove are idempotent and counted") {
    Graph g(6);
    CHECK(g.edge_count() == 0);
    g.add(1, 4);
    g.add(4, 1); // duplicate, different order
    CHECK(g.edge_count() == 1);
    CHECK(g.has(1, 4));
    CHECK(g.degree(1) == 1);
    CHECK(g.degree(4) == 1);
    g.remove(1, 4);
    g.remove(1, 4);
    CHECK(g.edge_count() == 0);
    CHECK_FALSE(g.has(4, 1));
}

TEST_CASE("degrees, codegrees, neighbor queries") {
    const Graph k = Graph::complete(7);
    CHECK(k.edge_count() == 21);
    CHECK(k.max_degree() == 6);
    CHECK(k.codegree(0, 6) == 5);
    CHECK(k.common_neighbors({0, 1, 2}) == 4);
    CHECK(k.common_neighbor_list(0, 1) == std::vector<int>{2, 3, 4, 5, 6});
    CHECK(k.neighbors_above(4) == std::vector<int>{5, 6});

    Rng rng(11);
    const Graph g = random_graph(40, 0.3, rng);
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) {
            int cod = 0;
            for (int x = 0; x < g.n(); ++x)
                if (g.has(u, x) && g.has(v, x)) ++cod;
            CHECK(g.codegree(u, v) == cod);
        }
}

TEST_CASE("for_each_edge visits edges once, ascending") {
    Rng rng(3);
    const Graph g = random_graph(25, 0.4, rng);
    std::vector<Edge> seen;
    g.for_each_edge([&](Edge e) { seen.push_back(e); });
    CHECK(std::int64_t(seen.size()) == g.edge_count());
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    CHECK(seen == g.edges());
    for (Edge e : seen) CHECK(g.has(e));
}

TEST_CASE("triangle counts match the cubic oracle") {
    Rng rng(17);
    for (double p : {0.1, 0.5, 0.9}) {
        const Graph g = random_graph(60, p, rng);
        const std::int64_t want = triangles_oracle(g);
        CHECK(count_triangles_serial(g) == want);
        CHECK(count_triangles(g) == want);
    }
    CHECK(count_triangles(Graph::complete(10)) == 120);
}

TEST_CASE("IntGraph arithmetic and parts") {
    IntGraph j(10);
    j.addw(Edge::make(0, 1), 2);
    j.addw(Edge::make(0, 1), -2); // cancels; entry erased
    CHECK(j.is_zero());
    j.addw(Edge::make(0, 1), 3);
    j.addw(Edge::make(2, 3), -1);
    CHECK(j.total() == 2);
    CHECK(j.abs_degree(0) == 3);
    CHECK(j.positive_part().get(Edge::make(0, 1)) == 3);
    CHECK(j.negative_part().get(Edge::make(2, 3)) == 1);
    CHECK(j.negative_part().get(Edge::make(0, 1)) == 0);
    const IntGraph sum = j.positive_part() - j.negative_part();
    CHECK(sum == j);
}

TEST_CASE("boundary operators satisfy the chain identities") {
    Rng rng(23);
    TriangleVec phi(20);
    for (int i = 0; i < 30; ++i) {
        int a = int(rng.below(20)), b = int(rng.below(20)), c = int(rng.below(20));
        if (a == b || b == c || a == c) continue;
        phi.addw(Triple::make(a, b, c), int(rng.below(5)) - 2);
    }
    const IntGraph d2 = boundary2(phi);
    const auto d1_tri = boundary1(phi, 20);
    const auto d1_edge = boundary1(d2);
    // ∂1∂2 = 2∂1 on triangles: each vertex of a triangle meets 2 of its edges.
    for (int v = 0; v < 20; ++v) CHECK(d1_edge[std::size_t(v)] == 2 * d1_tri[std::size_t(v)]);
    // ∂0∂2 = 3·(triangle weight sum); ∂0∂1 relations via totals.
    CHECK(boundary0(d2) == 3 * boundary0(phi));
}

TEST_CASE("density and tridivisibility") {
    CHECK(density(Graph::complete(8)).value() == doctest::Approx(1.0));
    CHECK(is_tridivisible(Graph::complete(7)));
    CHECK_FALSE(is_tridivisible(Graph::complete(6))); // odd degrees
    CHECK_FALSE(is_tridivisible(Graph::complete(8)));
    CHECK(is_tridivisible(Graph::complete(9)));

    IntGraph j(5);
    j.addw(Edge::make(0, 1), 1);
    j.addw(Edge::make(1, 2), 1);
    j.addw(Edge::make(0, 2), 1);
    CHECK(is_tridivisible(j)); // a triangle boundary
    j.addw(Edge::make(3, 4), 3);
    CHECK_FALSE(is_tridivisible(j)); // odd vertex sums at 3 and 4
}

TEST_CASE("boundedness value is the max vertex load over n") {
    IntGraph j(10);
    j.addw(Edge::make(0, 1), 2);
    j.addw(Edge::make(0, 2), -3);
    CHECK(boundedness_value(j) == doctest::Approx(0.5)); // vertex 0: (2+3)/10
    CHECK(is_bounded(j, 0.51));
    CHECK_FALSE(is_bounded(j, 0.5)); // strict
}

TEST_CASE("Matching validation and the Fano plane decomposes K_7") {
    Matching fano;
    for (auto [a, b, c] : {std::array<int, 3>{0, 1, 2}, {0, 3, 4}, {0, 5, 6},
                           {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}})
        fano.tris.push_back(Triple::make(a, b, c));
    CHECK(fano.validate_edge_disjoint());
    CHECK(fano.contains(Triple::make(2, 4, 5)));
    CHECK_FALSE(fano.contains(Triple::make(0, 1, 3)));
    CHECK(verify_decomposition(Graph::complete(7), fano));
    CHECK(fano.edge_union(7) == Graph::complete(7));
    CHECK(fano.edge_indicator(7).total() == 21);

    // Breaking disjointness or coverage must fail.
    Matching bad = fano;
    bad.tris.push_back(Triple::make(0, 1, 3));
    CHECK_FALSE(bad.validate_edge_disjoint());
    CHECK_FALSE(verify_decomposition(Graph::complete(7), bad));
    Matching incomplete = fano;
    incomplete.tris.pop_back();
    CHECK_FALSE(verify_decomposition(Graph::complete(7), incomplete));
}

TEST_CASE("graph save/load roundtrip, comments ignored") {
    Rng rng(5);
    const Graph g = random_graph(30, 0.25, rng);
    std::stringstream ss;
    save_graph(g, ss);
    CHECK(load_graph(ss) == g);

    std::stringstream annotated("# header\n3 1\n\n0 2\n");
    const Graph small = load_graph(annotated);
    CHECK(small.n() == 3);
    CHECK(small.edge_count() == 1);
    CHECK(small.has(0, 2));
}

TEST_CASE("is_subgraph_of") {
    Rng rng(9);
    const Graph g = random_graph(20, 0.5, rng);
    Graph h = g;
    CHECK(h.is_subgraph_of(g));
    h.remove(h.edges().front());
    CHECK(h.is_subgraph_of(g));
    CHECK_FALSE(g.is_subgraph_of(h));
}

TEST_CASE("typicality of K_n is near-perfect") {
    Rng rng(31);
    // For K_n the only deviation is the finite-size n-|S| vs n effect,
    // so the normalized statistics are O(1/n).
    const TypicalityReport rep = typicality_deviation(Graph::complete(40), 3, rng, 2000);
    CHECK(rep.worst_dev < 0.1);
    CHECK(rep.ensemble_dev < 0.1);
    CHECK_FALSE(rep.degenerate);
}
