#include "tridec/templ.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "tridec/completion.hpp"

#include <json.hpp>

namespace tridec {

namespace {

int paper_exponent(int n) {
    // Smallest a with n <= 2^{a-1}; then 2^{a-2} < n holds by minimality.
    int a = 1;
    while ((std::int64_t(1) << (a - 1)) < n) ++a;
    return a;
}

} // namespace

Template build_template(const Graph& g, TemplateMode mode, Rng& rng, int fixed_a) {
    const int n = g.n();
    int a = 0;
    switch (mode) {
        case TemplateMode::paper:
            if (n < 8) throw std::invalid_argument("paper mode requires n >= 8");
            a = paper_exponent(n);
            break;
        case TemplateMode::dense: {
            int k = 1;
            while ((1 << k) - 1 < n) ++k;
            if ((1 << k) - 1 != n) throw std::invalid_argument("dense mode requires n = 2^a - 1");
            a = k;
            break;
        }
        case TemplateMode::fixed_a:
            if (fixed_a < 1 || (std::int64_t(1) << fixed_a) <= n)
                throw std::invalid_argument("fixed mode requires 2^a > n");
            a = fixed_a;
            break;
    }

    Template tpl;
    tpl.a = a;
    tpl.gamma = double(n) / std::ldexp(1.0, a);

    // Uniformly random injection into the nonzero field elements: partial
    // Fisher-Yates over [1, 2^a - 1].
    const std::uint32_t field = std::uint32_t(1) << a;
    std::vector<FieldElem> pool(field - 1);
    for (std::uint32_t i = 0; i + 1 < field; ++i) pool[i] = i + 1;
    tpl.pi.resize(n);
    for (int v = 0; v < n; ++v) {
        const std::size_t j = v + rng.below(pool.size() - v);
        std::swap(pool[v], pool[j]);
        tpl.pi[v] = pool[v];
    }
    tpl.pi_inv.assign(field, -1);
    for (int v = 0; v < n; ++v) tpl.pi_inv[tpl.pi[v]] = v;

    // T = zero-XOR-sum triangles: the third point of an edge is determined,
    // so a single pass over edges finds each triangle (at its two smallest
    // vertices, kept once via w > v).
    tpl.Gstar = Graph(n);
    g.for_each_edge([&](Edge e) {
        const FieldElem want = tpl.pi[e.u] ^ tpl.pi[e.v];
        const int w = tpl.vertex_of_label(want);
        if (w > e.v && g.has(e.u, w) && g.has(e.v, w)) {
            const Triple t = Triple::make(e.u, e.v, w);
            tpl.T.tris.push_back(t);
            tpl.t_keys.insert(t.key());
            for (const Edge& te : t.edges()) tpl.Gstar.add(te);
        }
    });
    assert(tpl.Gstar.edge_count() == std::int64_t(tpl.T.tris.size()) * 3);
    return tpl;
}

TemplateStats template_stats(const Graph& g, const Template& tpl, int h, Rng& rng) {
    TemplateStats st;
    const double d = density(g).value();
    st.d_gstar = density(tpl.Gstar).value();
    st.predicted = tpl.gamma * d * d * d;
    st.rel_error = st.predicted > 0 ? std::abs(st.d_gstar / st.predicted - 1.0) : 0.0;
    st.paper_window = tpl.gamma > 0.25 && tpl.gamma < 0.5;
    st.t_size = std::int64_t(tpl.T.tris.size());
    st.pair_typicality = pair_typicality_deviation(g, tpl.Gstar, h, rng);
    return st;
}

CountReport count_shuffles(const Graph& g, const Template& tpl, Triple z,
                           std::uint64_t budget, Rng& rng) {
    if (!is_octahedral(z, g, tpl))
        throw std::invalid_argument("count_shuffles: target triangle is not octahedral");
    const int a = tpl.a;
    CountReport rep;
    const int bits = 2 * a;
    rep.space = bits >= 64 ? UINT64_MAX : (std::uint64_t(1) << bits);
    rep.exact = rep.space <= budget;

    const std::array<FieldElem, 3> zl = {tpl.label(z.a), tpl.label(z.b), tpl.label(z.c)};
    auto try_candidate = [&](FieldElem t1, FieldElem t2) {
        ++rep.examined;
        if (check_shuffle_candidate(zl, {t1, t2}, tpl, nullptr, nullptr)) ++rep.valid;
    };
    if (rep.exact) {
        const std::uint64_t field = std::uint64_t(1) << a;
        for (std::uint64_t t1 = 0; t1 < field; ++t1)
            for (std::uint64_t t2 = 0; t2 < field; ++t2)
                try_candidate(FieldElem(t1), FieldElem(t2));
    } else {
        for (std::uint64_t i = 0; i < budget; ++i) {
            const std::uint64_t r = rng.below(rep.space);
            try_candidate(FieldElem(r >> a), FieldElem(r & ((1u << a) - 1)));
        }
    }
    rep.estimate = rep.examined == 0
                       ? 0.0
                       : double(rep.valid) / double(rep.examined) * double(rep.space);
    const double d = density(g).value();
    rep.predicted = std::pow(d, 180) * std::pow(tpl.gamma, 18) * std::ldexp(1.0, 2 * a);
    rep.prediction_negligible = rep.predicted < 1.0;
    return rep;
}

CountReport count_linear_extensions(const Graph& g, const Template& tpl,
                                    const LinearExtension& ext,
                                    std::uint64_t budget, Rng& rng) {
    const int nv = ext.H.n();
    const int gu = ext.num_unknowns;
    if (gu < 1) throw std::invalid_argument("linear extension: need g >= 1");
    if (int(ext.masks.size()) != nv || int(ext.consts.size()) != nv)
        throw std::invalid_argument("linear extension: per-vertex forms required");
    for (int u = 0; u < nv; ++u)
        for (int v = u + 1; v < nv; ++v)
            if (ext.masks[u] == ext.masks[v] && ext.consts[u] == ext.consts[v])
                throw std::invalid_argument("linear extension: forms must be distinct");
    {
        std::vector<FieldElem> rows(ext.masks.begin(), ext.masks.end());
        if (gf2_rank(rows) != gu)
            throw std::invalid_argument("linear extension: mask matrix must have full column rank");
    }

    const int a = tpl.a;
    CountReport rep;
    const int bits = gu * a;
    rep.space = bits >= 64 ? UINT64_MAX : (std::uint64_t(1) << bits);
    rep.exact = rep.space <= budget;

    std::vector<FieldElem> y(gu, 0);
    std::vector<int> image(nv, -1);
    auto embeds = [&]() {
        for (int v = 0; v < nv; ++v) {
            FieldElem lab = ext.consts[v];
            for (int i = 0; i < gu; ++i)
                if (ext.masks[v] >> i & 1u) lab ^= y[i];
            const int vert = tpl.vertex_of_label(lab);
            if (vert < 0) return false;
            image[v] = vert;
        }
        for (int u = 0; u < nv; ++u)
            for (int v = u + 1; v < nv; ++v)
                if (image[u] == image[v]) return false;
        bool ok = true;
        ext.H.for_each_edge([&](Edge e) {
            ok = ok && tpl.Gstar.has(image[e.u], image[e.v]);
        });
        return ok;
    };
    auto decode = [&](std::uint64_t k) {
        for (int i = 0; i < gu; ++i) y[i] = FieldElem(k >> (i * a)) & ((1u << a) - 1);
    };
    if (rep.exact) {
        for (std::uint64_t k = 0; k < rep.space; ++k) {
            decode(k);
            ++rep.examined;
            if (embeds()) ++rep.valid;
        }
    } else {
        for (std::uint64_t i = 0; i < budget; ++i) {
            decode(rng.next() & (rep.space - 1));
            ++rep.examined;
            if (embeds()) ++rep.valid;
        }
    }
    rep.estimate = rep.examined == 0
                       ? 0.0
                       : double(rep.valid) / double(rep.examined) * double(rep.space);

    // Prediction d^{#edges outside the base} * gamma^{#non-base vertices} * 2^{ga}.
    const double d = density(g).value();
    int free_vertices = 0;
    for (int v = 0; v < nv; ++v)
        if (ext.masks[v] != 0) ++free_vertices;
    std::int64_t outside = 0;
    ext.H.for_each_edge([&](Edge e) {
        if (ext.masks[e.u] != 0 || ext.masks[e.v] != 0) ++outside;
    });
    rep.predicted = std::pow(d, double(outside)) * std::pow(tpl.gamma, double(free_vertices)) *
                    std::ldexp(1.0, bits);
    rep.prediction_negligible = rep.predicted < 1.0;
    return rep;
}

std::string template_to_json(const Template& tpl) {
    nlohmann::json j;
    j["a"] = tpl.a;
    j["gamma"] = tpl.gamma;
    j["pi"] = tpl.pi;
    auto& arr = j["T"] = nlohmann::json::array();
    for (const Triple& t : tpl.T.tris) arr.push_back({t.a, t.b, t.c});
    return j.dump();
}

Template template_from_json(const std::string& text, const Graph& g) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Template tpl;
    tpl.a = j.at("a").get<int>();
    tpl.gamma = j.at("gamma").get<double>();
    tpl.pi = j.at("pi").get<std::vector<FieldElem>>();
    if (int(tpl.pi.size()) != g.n()) throw std::runtime_error("template json: pi size mismatch");
    tpl.pi_inv.assign(std::size_t(1) << tpl.a, -1);
    for (int v = 0; v < g.n(); ++v) {
        const FieldElem x = tpl.pi[v];
        if (x == 0 || x >= tpl.pi_inv.size() || tpl.pi_inv[x] != -1)
            throw std::runtime_error("template json: pi not an injection into nonzero elements");
        tpl.pi_inv[x] = v;
    }
    tpl.Gstar = Graph(g.n());
    for (const auto& item : j.at("T")) {
        const Triple t = Triple::make(item.at(0).get<int>(), item.at(1).get<int>(), item.at(2).get<int>());
        if ((tpl.pi[t.a] ^ tpl.pi[t.b] ^ tpl.pi[t.c]) != 0)
            throw std::runtime_error("template json: non-zero-sum triangle");
        for (const Edge& e : t.edges()) {
            if (!g.has(e)) throw std::runtime_error("template json: triangle outside G");
            tpl.Gstar.add(e);
        }
        tpl.T.tris.push_back(t);
        tpl.t_keys.insert(t.key());
    }
    if (tpl.Gstar.edge_count() != std::int64_t(tpl.T.tris.size()) * 3)
        throw std::runtime_error("template json: triangles not edge-disjoint");
    return tpl;
}

} // namespace tridec
