#include "tridec/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tridec {

void PipelineConfig::derive_constants(double d) {
    if (d <= 0.0) d = 1.0; // degenerate input; constants only feed reports
    if (c1 < 0) c1 = std::pow(50.0 * c, 0.25);
    if (c2 < 0) c2 = 1e2 * c1 * std::pow(d, -6.0);
    if (c3 < 0) c3 = 1e20 * c2 * std::pow(d, -50.0);
    if (c4 < 0) c4 = 1e20 * c3 * std::pow(d, -100.0);
    if (c5 < 0) c5 = 1e10 * c4 * std::pow(d, -180.0);
}

Graph graph_difference(const Graph& g, const Graph& h) {
    Graph out(g.n());
    g.for_each_edge([&](Edge e) {
        if (!h.has(e)) out.add(e);
    });
    return out;
}

bool check_spill_divisibility(const Matching& t, const Matching& n,
                              const Matching& mc, const Graph& g,
                              const Graph& s) {
    IntGraph sum(g.n());
    for (const Matching* m : {&t, &n, &mc})
        for (const Triple& tr : m->tris)
            for (const Edge& e : tr.edges()) sum.addw(e, 1);
    const IntGraph lhs = sum - IntGraph::from_graph(g);
    return lhs == IntGraph::from_graph(s) && is_tridivisible(s);
}

namespace {

std::string mode_name(const PipelineConfig& cfg) {
    switch (cfg.mode) {
        case TemplateMode::paper: return "paper";
        case TemplateMode::dense: return "dense";
        case TemplateMode::fixed_a: return "fixed_a";
    }
    return "?";
}

// Runs one stage, recording its report; returns false when the stage
// aborted (result is then marked failed).
bool run_stage(DecompositionResult& res, const std::string& name,
               const std::function<std::string()>& body) {
    StageReport sr;
    sr.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        sr.detail = body();
        sr.ok = true;
    } catch (const StageAbort& e) {
        sr.detail = e.what();
        res.status = e.what();
        res.failed_stage = name;
    }
    sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.stages.push_back(sr);
    return sr.ok;
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

} // namespace

DecompositionResult decompose(const Graph& g, const PipelineConfig& cfg) {
    Rng trng(derive_seed(cfg.seed, "template", 0));
    const Template tpl = build_template(g, cfg.mode, trng, cfg.fixed_a);
    return decompose(g, tpl, cfg);
}

DecompositionResult decompose(const Graph& g, const Template& tpl,
                              const PipelineConfig& cfg_in) {
    if (!is_tridivisible(g))
        throw std::invalid_argument("decompose: graph is not tridivisible");
    PipelineConfig cfg = cfg_in;
    cfg.derive_constants(density(g).value());

    DecompositionResult res;
    res.seed = cfg.seed;
    res.n = g.n();
    res.mode = mode_name(cfg);
    {
        Rng r(derive_seed(cfg.seed, "typicality", 0));
        res.typicality = typicality_deviation(g, 4, r);
    }

    if (!tpl.Gstar.is_subgraph_of(g))
        throw std::invalid_argument("decompose: template does not fit the graph");

    Matching N, Mc, Mo, Mi;
    Graph leave, spill;
    Psi psi;
    ShuffleRunResult sh;

    bool ok = run_stage(res, "template", [&] {
        return fmt("a=%d gamma=%.4f |T|=%zu d*=%.4f", tpl.a, tpl.gamma,
                   tpl.T.tris.size(), density(tpl.Gstar).value());
    });

    if (ok) ok = run_stage(res, "nibble", [&] {
        const double b = 50.0 * cfg.c;
        Rng r(derive_seed(cfg.seed, "nibble", 0));
        RemovalResult nib = nibble(graph_difference(g, tpl.Gstar), b, r, cfg.max_retries);
        N = std::move(nib.N);
        leave = std::move(nib.leave);
        return fmt("|N|=%zu |L|=%lld c(L)=%.5f (c1=%.5f)", N.tris.size(),
                   static_cast<long long>(leave.edge_count()),
                   boundedness_value(leave), cfg.c1);
    });

    if (ok) ok = run_stage(res, "cover", [&] {
        Rng r(derive_seed(cfg.seed, "cover", 0));
        CoverResult cov = cover_leave(leave, tpl.Gstar, r, cfg.max_retries);
        Mc = std::move(cov.Mc);
        spill = std::move(cov.spill);
        return fmt("|Mc|=%zu |S|=%lld c(S)=%.5f", Mc.tris.size(),
                   static_cast<long long>(spill.edge_count()),
                   boundedness_value(spill));
    });

    if (ok) ok = run_stage(res, "divisibility", [&] {
        if (!check_spill_divisibility(tpl.T, N, Mc, g, spill))
            throw StageAbort("divisibility", "UT + UN + UMc - G != S or S not tridivisible");
        return std::string("S tridivisible; identity holds");
    });

    if (ok) ok = run_stage(res, "hole", [&] {
        Rng r(derive_seed(cfg.seed, "hole", 0));
        const TriangleVec phi =
            integral_relaxation(IntGraph::from_graph(spill), g.n(), r);
        HoleConfig hc;
        hc.budget = cfg.budget;
        hc.max_retries = cfg.max_retries;
        hc.c2 = cfg.c2;
        hc.c3 = cfg.c3;
        HoleResult hr = octahedral_eliminate_hole(phi, tpl.Gstar, hc, r);
        Mo = std::move(hr.Mo);
        Mi = std::move(hr.Mi);
        return fmt("|phi|=%zu |Mo|=%zu |Mi|=%zu c(UMo)=%.5f", phi.w.size(),
                   Mo.tris.size(), Mi.tris.size(), hr.mo_boundedness);
    });

    if (ok) ok = run_stage(res, "completion", [&] {
        Rng r(derive_seed(cfg.seed, "completion", 0));
        CompletionConfig cc;
        cc.budget = cfg.budget;
        cc.max_retries = cfg.max_retries;
        cc.c4 = cfg.c4;
        cc.c5 = cfg.c5;
        psi = eliminate_for_completion(Mc, Mi, Mo, leave, g, tpl, cc, r);
        return fmt("|M1|=%zu |M2|=%zu p1=%d c(Delta)=%.5f line=%lld plane=%lld",
                   psi.M1.tris.size(), psi.M2.tris.size(), psi.p1_ok ? 1 : 0,
                   psi.p2.bounded_value, static_cast<long long>(psi.p2.max_line),
                   static_cast<long long>(psi.p3_max_plane));
    });

    if (ok) ok = run_stage(res, "shuffle", [&] {
        Rng r(derive_seed(cfg.seed, "shuffle", 0));
        CompletionConfig cc;
        cc.budget = cfg.budget;
        cc.max_retries = cfg.max_retries;
        sh = run_shuffle_algorithm(psi.M2, tpl, psi.Delta, cc, r);
        return fmt("|M3|=%zu |M4|=%zu", sh.M3.tris.size(), sh.M4.tris.size());
    });

    if (ok) ok = run_stage(res, "assemble", [&] {
        std::set<std::uint64_t> m2k, m3k;
        for (const Triple& t : psi.M2.tris) m2k.insert(t.key());
        for (const Triple& t : sh.M3.tris) m3k.insert(t.key());
        res.M.tris = N.tris;
        for (const Triple& t : psi.M1.tris) res.M.tris.push_back(t);
        for (const Triple& t : sh.M4.tris)
            if (!m2k.count(t.key())) res.M.tris.push_back(t);
        for (const Triple& t : tpl.T.tris)
            if (!m3k.count(t.key())) res.M.tris.push_back(t);
        res.M.sort_canonical();
        if (!verify_decomposition(g, res.M))
            throw StageAbort("assemble", "assembled set is not a decomposition of G");
        return fmt("|M|=%zu = |G|/3", res.M.tris.size());
    });

    if (ok) {
        res.success = true;
        res.status = "ok";
    } else {
        res.M.tris.clear();
    }
    return res;
}

PuncturedInstance make_punctured_instance(int a, double epsilon, Rng& rng) {
    if (a < 5) throw std::invalid_argument("make_punctured_instance: need a >= 5");
    if (epsilon < 0.0 || epsilon >= 0.05)
        throw std::invalid_argument("make_punctured_instance: need 0 <= epsilon < 0.05");
    const int n = (1 << a) - 1;
    PuncturedInstance inst;
    inst.g = Graph::complete(n);
    Template& tpl = inst.tpl;
    tpl.a = a;
    tpl.gamma = static_cast<double>(n) / static_cast<double>(1 << a);
    // Uniform random bijection onto the nonzero field elements.
    std::vector<FieldElem> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = static_cast<FieldElem>(v + 1);
    for (int i = n - 1; i > 0; --i)
        std::swap(labels[i], labels[rng.below(i + 1)]);
    tpl.pi = labels;
    tpl.pi_inv.assign(1 << a, -1);
    for (int v = 0; v < n; ++v) tpl.pi_inv[labels[v]] = v;

    // Every zero-label-sum triple, then a uniform epsilon-fraction removed.
    std::vector<Triple> full;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const FieldElem lw = labels[u] ^ labels[v];
            const int w = tpl.pi_inv[lw];
            if (w > v) full.push_back(Triple::make(u, v, w));
        }
    const std::size_t drop = static_cast<std::size_t>(epsilon * full.size());
    for (std::size_t k = 0; k < drop; ++k)
        std::swap(full[k], full[k + rng.below(full.size() - k)]);
    tpl.T.tris.assign(full.begin() + drop, full.end());
    tpl.T.sort_canonical();
    tpl.Gstar = tpl.T.edge_union(n);
    for (const Triple& t : tpl.T.tris) tpl.t_keys.insert(t.key());
    return inst;
}

std::string result_to_json(const DecompositionResult& r) {
    nlohmann::json j;
    j["success"] = r.success;
    j["status"] = r.status;
    j["failed_stage"] = r.failed_stage;
    j["seed"] = r.seed;
    j["mode"] = r.mode;
    j["n"] = r.n;
    j["typicality"] = {{"worst_dev", r.typicality.worst_dev},
                       {"ensemble_dev", r.typicality.ensemble_dev},
                       {"sampled", r.typicality.sampled}};
    nlohmann::json stages = nlohmann::json::array();
    // Timing is deliberately omitted so identical seeds give identical bytes.
    for (const StageReport& s : r.stages)
        stages.push_back({{"name", s.name}, {"ok", s.ok}, {"detail", s.detail}});
    j["stages"] = stages;
    nlohmann::json tris = nlohmann::json::array();
    for (const Triple& t : r.M.tris) tris.push_back({t.a, t.b, t.c});
    j["decomposition"] = tris;
    return j.dump(2);
}

} // namespace tridec
