#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tridec/pipeline.hpp"

#include "json.hpp"

using namespace tridec;

TEST_CASE("graph_difference") {
    Graph g(5), h(5);
    g.add(0, 1);
    g.add(1, 2);
    g.add(3, 4);
    h.add(1, 2);
    h.add(2, 3); // not in g; must not matter
    const Graph d = graph_difference(g, h);
    CHECK(d.edge_count() == 2);
    CHECK(d.has(0, 1));
    CHECK(d.has(3, 4));
    CHECK_FALSE(d.has(1, 2));
}

TEST_CASE("derived constants cascade") {
    PipelineConfig cfg;
    cfg.c = 1e-4;
    cfg.derive_constants(0.5);
    CHECK(cfg.c1 == doctest::Approx(std::pow(50 * 1e-4, 0.25)));
    CHECK(cfg.c2 == doctest::Approx(1e2 * cfg.c1 * std::pow(0.5, -6.0)));
    CHECK(cfg.c3 == doctest::Approx(1e20 * cfg.c2 * std::pow(0.5, -50.0)));
    CHECK(cfg.c4 == doctest::Approx(1e20 * cfg.c3 * std::pow(0.5, -100.0)));
    CHECK(cfg.c5 == doctest::Approx(1e10 * cfg.c4 * std::pow(0.5, -180.0)));
    // Explicit overrides are respected.
    PipelineConfig over;
    over.c2 = 7.0;
    over.derive_constants(0.5);
    CHECK(over.c2 == 7.0);
}

TEST_CASE("check_spill_divisibility and fault injection") {
    // Real stage composition on a punctured instance: nibble the non-template
    // part, cover the leave from Gstar, then check the exact spill identity.
    Rng irng(1);
    const PuncturedInstance inst = make_punctured_instance(5, 0.04, irng);
    const Graph rest = graph_difference(inst.g, inst.tpl.Gstar);
    CHECK(rest.edge_count() > 0);
    Rng nrng(2);
    const RemovalResult res = nibble(rest, 50e-9, nrng);
    Rng crng(3);
    const CoverResult cov = cover_leave(res.leave, inst.tpl.Gstar, crng);

    CHECK(check_spill_divisibility(inst.tpl.T, res.N, cov.Mc, inst.g, cov.spill));

    // Dropping a triangle breaks the identity.
    Matching broken = res.N;
    REQUIRE(!broken.tris.empty());
    broken.tris.pop_back();
    CHECK_FALSE(check_spill_divisibility(inst.tpl.T, broken, cov.Mc, inst.g, cov.spill));
    // A wrong spill graph fails too.
    Graph wrong = cov.spill;
    wrong.add(inst.tpl.Gstar.edges().front());
    CHECK_FALSE(check_spill_divisibility(inst.tpl.T, res.N, cov.Mc, inst.g, wrong));
}

TEST_CASE("make_punctured_instance shape") {
    Rng rng(1);
    const PuncturedInstance full = make_punctured_instance(5, 0.0, rng);
    CHECK(full.g == Graph::complete(31));
    CHECK(full.tpl.T.tris.size() == 155); // full decomposition of K_31
    CHECK(full.tpl.Gstar == full.g);

    Rng rng2(2);
    const PuncturedInstance inst = make_punctured_instance(7, 0.005, rng2);
    CHECK(inst.g == Graph::complete(127));
    // |T0| = 127*126/6 = 2667, minus floor(0.005 * 2667) = 13 dropped.
    CHECK(inst.tpl.T.tris.size() == 2654);
    CHECK(inst.tpl.T.validate_edge_disjoint());
    CHECK(inst.tpl.Gstar.edge_count() == 3 * 2654);
}

TEST_CASE("decompose a dense instance end to end") {
    PipelineConfig cfg;
    cfg.mode = TemplateMode::dense;
    cfg.seed = 5;
    const DecompositionResult res = decompose(Graph::complete(31), cfg);
    REQUIRE(res.success);
    CHECK(res.failed_stage.empty());
    CHECK(res.status == "ok");
    CHECK(verify_decomposition(Graph::complete(31), res.M));
    for (const StageReport& s : res.stages) CHECK(s.ok);
}

TEST_CASE("decompose rejects non-tridivisible input") {
    PipelineConfig cfg;
    CHECK_THROWS_AS(decompose(Graph::complete(12), cfg), std::invalid_argument);
}

TEST_CASE("punctured instance decomposes and the JSON is deterministic") {
    Rng irng(derive_seed(123, "instance", 0));
    const PuncturedInstance inst = make_punctured_instance(7, 0.005, irng);
    PipelineConfig cfg;
    cfg.mode = TemplateMode::dense;
    cfg.seed = 123;
    cfg.c = 1e-9;

    const DecompositionResult r1 = decompose(inst.g, inst.tpl, cfg);
    REQUIRE(r1.success);
    CHECK(verify_decomposition(inst.g, r1.M));

    const DecompositionResult r2 = decompose(inst.g, inst.tpl, cfg);
    const std::string j1 = result_to_json(r1);
    CHECK(j1 == result_to_json(r2));

    // JSON is well formed and carries the key fields.
    const nlohmann::json parsed = nlohmann::json::parse(j1);
    CHECK(parsed.at("success").get<bool>());
    CHECK(parsed.at("seed").get<std::uint64_t>() == 123);
    CHECK(parsed.at("n").get<int>() == 127);
    CHECK(parsed.at("stages").is_array());
    CHECK(parsed.at("decomposition").size() == r1.M.tris.size());
}
