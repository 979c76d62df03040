#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/counting.hpp"
#include "tridec/graph.hpp"

using namespace tridec;

TEST_CASE("parallel triangle counting matches the serial reference") {
    Rng rng(1);
    for (auto [n, p] : {std::pair<int, double>{200, 0.1}, {300, 0.5}, {150, 0.9}}) {
        const Graph g = random_graph(n, p, rng);
        CHECK(count_triangles(g) == count_triangles_serial(g));
    }
    CHECK(count_triangles(Graph::complete(64)) == count_triangles_serial(Graph::complete(64)));
    CHECK(count_triangles(Graph(10)) == 0);
}

TEST_CASE("parallel STS search matches the serial reference") {
    CHECK(brute_force_count_sts(7) == brute_force_count_sts_serial(7));
    CHECK(brute_force_count_sts(9) == brute_force_count_sts_serial(9));
    CHECK(brute_force_count_sts(9) == 840);
}
