#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/templ.hpp"

#include <map>
#include <set>

using namespace tridec;

namespace {

// Every triple listed in T has zero label XOR and all edges in Gstar.
void check_template_invariants(const Graph& g, const Template& tpl) {
    std::set<FieldElem> labels;
    for (int v = 0; v < g.n(); ++v) {
        const FieldElem x = tpl.label(v);
        CHECK(x != 0);
        CHECK(x < (1u << tpl.a));
        CHECK(labels.insert(x).second); // injective
        CHECK(tpl.vertex_of_label(x) == v);
    }
    std::map<std::uint32_t, int> edge_use;
    for (const Triple& t : tpl.T.tris) {
        CHECK((tpl.label(t.a) ^ tpl.label(t.b) ^ tpl.label(t.c)) == 0);
        CHECK(tpl.is_template(t));
        for (Edge e : t.edges()) {
            CHECK(g.has(e));
            CHECK(tpl.Gstar.has(e));
            CHECK(++edge_use[e.key()] == 1); // each edge in at most one T-triple
        }
    }
    CHECK(tpl.Gstar.edge_count() == 3 * std::int64_t(tpl.T.tris.size()));
    CHECK(tpl.Gstar.is_subgraph_of(g));
    CHECK(tpl.T.validate_edge_disjoint());
}

} // namespace

TEST_CASE("dense template on K_31 is a full decomposition") {
    const Graph g = Graph::complete(31);
    Rng rng(1);
    const Template tpl = build_template(g, TemplateMode::dense, rng);
    CHECK(tpl.a == 5);
    check_template_invariants(g, tpl);
    // Every pair has a zero-sum third point, so T decomposes K_31.
    CHECK(std::int64_t(tpl.T.tris.size()) == 31 * 30 / 6);
    CHECK(tpl.Gstar == g);
    CHECK(verify_decomposition(g, tpl.T));
}

TEST_CASE("paper mode picks the smallest a with n <= 2^{a-1}") {
    Rng rng(2);
    const Graph g = Graph::complete(64);
    const Template tpl = build_template(g, TemplateMode::paper, rng);
    CHECK(tpl.a == 7);
    CHECK(tpl.gamma == doctest::Approx(0.5));
    check_template_invariants(g, tpl);
}

TEST_CASE("fixed_a mode uses the requested exponent") {
    Rng rng(3);
    const Graph g = Graph::complete(20);
    const Template tpl = build_template(g, TemplateMode::fixed_a, rng, 6);
    CHECK(tpl.a == 6);
    CHECK(tpl.gamma == doctest::Approx(20.0 / 64.0));
    check_template_invariants(g, tpl);
}

TEST_CASE("template on a sparse graph only uses present triangles") {
    Rng rng(4);
    const Graph g = random_graph(64, 0.4, rng);
    const Template tpl = build_template(g, TemplateMode::paper, rng);
    check_template_invariants(g, tpl);
    CHECK(tpl.T.tris.size() > 0);
}

TEST_CASE("template JSON roundtrip") {
    const Graph g = Graph::complete(31);
    Rng rng(5);
    const Template tpl = build_template(g, TemplateMode::dense, rng);
    const Template back = template_from_json(template_to_json(tpl), g);
    CHECK(back.a == tpl.a);
    CHECK(back.pi == tpl.pi);
    CHECK(back.pi_inv == tpl.pi_inv);
    CHECK(back.T.tris == tpl.T.tris);
    CHECK(back.Gstar == tpl.Gstar);
    CHECK(back.t_keys == tpl.t_keys);
}

TEST_CASE("template_stats on the dense template") {
    const Graph g = Graph::complete(31);
    Rng rng(6);
    const Template tpl = build_template(g, TemplateMode::dense, rng);
    Rng srng(7);
    const TemplateStats st = template_stats(g, tpl, 3, srng);
    CHECK(st.t_size == 155);
    CHECK(st.d_gstar == doctest::Approx(1.0));
    CHECK(st.rel_error < 0.05); // gamma*d^3 = 31/32
}

TEST_CASE("count_linear_extensions matches brute-force enumeration") {
    const Graph g = Graph::complete(31);
    Rng rng(8);
    const Template tpl = build_template(g, TemplateMode::dense, rng);

    // H = path on 3 vertices: base u, then L_1 = c1 ^ y1, L_2 = c2 ^ y1 ^ y2.
    LinearExtension ext;
    ext.H = Graph(3);
    ext.H.add(0, 1);
    ext.H.add(1, 2);
    ext.consts = {tpl.label(0), 3, 5};
    ext.masks = {0, 0b01, 0b11};
    ext.num_unknowns = 2;

    Rng crng(9);
    const CountReport rep = count_linear_extensions(g, tpl, ext, 1u << 20, crng);
    CHECK(rep.exact);
    CHECK(rep.space == (1ull << 10)); // (2^5)^2

    // Brute force over all (y1, y2).
    std::uint64_t valid = 0;
    for (FieldElem y1 = 0; y1 < 32; ++y1)
        for (FieldElem y2 = 0; y2 < 32; ++y2) {
            const FieldElem l0 = ext.consts[0];
            const FieldElem l1 = FieldElem(ext.consts[1] ^ y1);
            const FieldElem l2 = FieldElem(ext.consts[2] ^ y1 ^ y2);
            if (l0 == l1 || l1 == l2 || l0 == l2) continue;
            const int v0 = tpl.vertex_of_label(l0);
            const int v1 = tpl.vertex_of_label(l1);
            const int v2 = tpl.vertex_of_label(l2);
            if (v0 < 0 || v1 < 0 || v2 < 0) continue;
            if (!tpl.Gstar.has(v0, v1) || !tpl.Gstar.has(v1, v2)) continue;
            ++valid;
        }
    CHECK(rep.valid == valid);
    CHECK(rep.estimate == doctest::Approx(double(valid)));
}

TEST_CASE("count_linear_extensions rejects degenerate systems") {
    const Graph g = Graph::complete(31);
    Rng rng(10);
    const Template tpl = build_template(g, TemplateMode::dense, rng);
    LinearExtension ext;
    ext.H = Graph(2);
    ext.H.add(0, 1);
    ext.consts = {0, 1};
    ext.masks = {0b01, 0b01}; // rank 1 incidence but... forms distinct; make rank-deficient:
    ext.num_unknowns = 2;     // y2 never appears -> column rank < g
    Rng crng(11);
    CHECK_THROWS(count_linear_extensions(g, tpl, ext, 1000, crng));
}

TEST_CASE("count_shuffles finds valid shuffles on the dense template") {
    const Graph g = Graph::complete(31);
    Rng rng(12);
    const Template tpl = build_template(g, TemplateMode::dense, rng);

    // Find an octahedral (non-zero-label-sum) triple.
    Triple z{};
    bool found = false;
    for (int a = 0; a < g.n() && !found; ++a)
        for (int b = a + 1; b < g.n() && !found; ++b)
            for (int c = b + 1; c < g.n() && !found; ++c)
                if ((tpl.label(a) ^ tpl.label(b) ^ tpl.label(c)) != 0) {
                    z = Triple::make(a, b, c);
                    found = true;
                }
    REQUIRE(found);

    Rng crng(13);
    const CountReport rep = count_shuffles(g, tpl, z, 5000, crng);
    CHECK(rep.examined > 0);
    CHECK(rep.valid > 0);
    CHECK(rep.estimate > 0.0);

    // A zero-sum (template-compatible) triple is not a valid target.
    const Triple t0 = tpl.T.tris.front();
    CHECK_THROWS(count_shuffles(g, tpl, t0, 5000, crng));
}
