#include "tridec/hole.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "tridec/completion.hpp" // Octahedron, StageAbort

namespace tridec {

IntGraph SignedWalk::to_intgraph(int n) const {
    IntGraph j(n);
    const int len = length();
    for (int i = 0; i < len; ++i) {
        const int s = (i & 1) ? -first_sign : first_sign;
        j.addw(Edge::make(verts[i], verts[(i + 1) % len]), s);
    }
    return j;
}

IntGraph SignedFourCycle::to_intgraph(int n) const {
    IntGraph j(n);
    j.addw(Edge::make(v[0], v[1]), sign);
    j.addw(Edge::make(v[1], v[2]), -sign);
    j.addw(Edge::make(v[2], v[3]), sign);
    j.addw(Edge::make(v[3], v[0]), -sign);
    return j;
}

std::vector<SignedWalk> extract_signed_walks(const IntGraph& j) {
    for (std::int64_t s : boundary1(j))
        if (s != 0)
            throw std::invalid_argument("extract_signed_walks: vertex sums must vanish");

    IntGraph rem = j;
    std::vector<SignedWalk> walks;
    // Per-vertex lists of remaining signed incident edges, rebuilt lazily.
    auto pick_incident = [&](int v, int want_sign) -> int {
        // Returns a neighbor u with sign(rem_{vu}) == want_sign, or -1.
        for (const auto& [key, wt] : rem.w) {
            const Edge e = Edge::from_key(key);
            if ((wt > 0) != (want_sign > 0)) continue;
            if (e.u == v) return e.v;
            if (e.v == v) return e.u;
        }
        return -1;
    };
    while (!rem.is_zero()) {
        // Start anywhere: first remaining edge, traversed with its own sign.
        const Edge e0 = Edge::from_key(rem.w.begin()->first);
        const int s0 = rem.w.begin()->second > 0 ? 1 : -1;
        SignedWalk walk;
        walk.first_sign = s0;
        walk.verts = {e0.u, e0.v};
        rem.addw(e0, -s0);
        int cur = e0.v;
        int next_sign = -s0;
        while (true) {
            // Close on returning to the start with an even number of edges
            // consumed (verts holds one more entry than edges here).
            if (walk.verts.size() >= 3 && cur == walk.verts.front() &&
                walk.verts.size() % 2 == 1) {
                walk.verts.pop_back(); // drop duplicated start
                break;
            }
            const int nxt = pick_incident(cur, next_sign);
            if (nxt < 0)
                throw std::logic_error("extract_signed_walks: dead end (balance violated)");
            rem.addw(Edge::make(cur, nxt), -next_sign);
            walk.verts.push_back(nxt);
            cur = nxt;
            next_sign = -next_sign;
        }
        walks.push_back(std::move(walk));
    }
    return walks;
}

namespace {

// Chain decomposition of a walk whose orientation admits it (no adjacent
// degenerate positions). Returns nullopt if some replacement precondition
// fails for this orientation.
std::optional<std::vector<SignedFourCycle>> chain_for_orientation(
    const std::vector<int>& w, int first_sign) {
    const int m = static_cast<int>(w.size()) / 2;
    // x_1 = w_0, x_i = w_{2m+1-i} (i >= 2); y_i = w_i. Indexed from 1.
    std::vector<int> x(m + 1), y(m + 1);
    x[1] = w[0];
    for (int i = 2; i <= m; ++i) x[i] = w[2 * m + 1 - i];
    for (int i = 1; i <= m; ++i) y[i] = w[i];

    std::vector<int> collide;
    for (int i = 1; i <= m; ++i)
        if (x[i] == y[i]) {
            if (i == 1 || i == m) return std::nullopt;
            collide.push_back(i);
        }
    for (std::size_t k = 1; k < collide.size(); ++k)
        if (collide[k] == collide[k - 1] + 1) return std::nullopt;
    for (int i : collide)
        if (x[i + 1] == y[i - 1]) return std::nullopt;

    // Global sign: summand i covers edge {x_i x_{i+1}} with sign (-1)^i; the
    // identity's right side carries {x_1 y_1} = {w_0 w_1} with coefficient
    // +1 ... the whole chain is scaled so that edge w_0w_1 gets first_sign.
    const int scale = first_sign;
    std::vector<SignedFourCycle> out;
    auto emit = [&](int i, std::array<int, 4> vv) {
        SignedFourCycle c;
        c.v = vv;
        c.sign = ((i & 1) ? -1 : 1) * scale;
        // Degenerate all-equal pairs cannot occur: callers guarantee the
        // four cycle has distinct consecutive vertices.
        out.push_back(c);
    };
    for (int i = 1; i <= m - 1; ++i) {
        if (i + 1 <= m && x[i + 1] == y[i + 1]) {
            // Replacement pair for summands i and i+1 (collision at i+1).
            emit(i, {x[i], x[i + 1], x[i + 2], y[i]});
            emit(i + 1, {x[i + 2], y[i], y[i + 1], y[i + 2]});
            continue;
        }
        if (x[i] == y[i]) continue; // handled as part of the pair above
        emit(i, {x[i], x[i + 1], y[i + 1], y[i]});
    }
    return out;
}

IntGraph sum_cycles(const std::vector<SignedFourCycle>& cs, int n) {
    IntGraph acc(n);
    for (const auto& c : cs) acc = acc + c.to_intgraph(n);
    return acc;
}

int max_vertex(const std::vector<int>& v) {
    return *std::max_element(v.begin(), v.end());
}

} // namespace

std::vector<SignedFourCycle> walk_to_four_cycles(const SignedWalk& w) {
    const int len = w.length();
    if (len < 4 || len % 2 != 0)
        throw std::invalid_argument("walk_to_four_cycles: need even length >= 4");
    const int n = max_vertex(w.verts) + 1;
    const IntGraph target = w.to_intgraph(n);
    const int m = len / 2;
    if (m == 2) {
        SignedFourCycle c;
        c.v = {w.verts[0], w.verts[1], w.verts[2], w.verts[3]};
        c.sign = w.first_sign;
        assert(c.to_intgraph(n) == target);
        return {c};
    }

    // Try every rotation (even offsets keep the sign pattern aligned with a
    // recomputed first sign) and both directions for a chain-compatible
    // orientation.
    for (int dir = 0; dir < 2; ++dir) {
        for (int off = 0; off < len; ++off) {
            std::vector<int> v(len);
            for (int i = 0; i < len; ++i)
                v[i] = dir == 0 ? w.verts[(off + i) % len]
                                : w.verts[(off + len - i) % len];
            // Sign of edge (v[0], v[1]) in the original walk.
            int s;
            if (dir == 0) {
                s = (off & 1) ? -w.first_sign : w.first_sign;
            } else {
                // Edge (v[0], v[1]) is original edge index (off-1 mod len).
                const int idx = (off + len - 1) % len;
                s = (idx & 1) ? -w.first_sign : w.first_sign;
            }
            auto chain = chain_for_orientation(v, s);
            if (chain && sum_cycles(*chain, n) == target) return *chain;
        }
    }

    // Fallback: peel a leading four-cycle from a rotation with four distinct
    // consecutive vertices whose removal leaves a valid shorter walk.
    for (int off = 0; off < len; ++off) {
        auto at = [&](int i) { return w.verts[(off + i) % len]; };
        if (at(0) == at(3)) continue;
        const int s = (off & 1) ? -w.first_sign : w.first_sign;
        SignedFourCycle head;
        head.v = {at(0), at(1), at(2), at(3)};
        head.sign = s;
        SignedWalk rest;
        rest.first_sign = s;
        rest.verts.push_back(at(0));
        for (int i = 3; i < len; ++i) rest.verts.push_back(at(i));
        auto tail = walk_to_four_cycles(rest);
        tail.push_back(head);
        if (sum_cycles(tail, n) == target) return tail;
    }
    throw std::logic_error("walk_to_four_cycles: no decomposition found");
}

TriangleVec integral_relaxation(const IntGraph& s, int n, Rng& rng) {
    if (!is_tridivisible(s))
        throw std::invalid_argument("integral_relaxation: s is not tridivisible");
    TriangleVec phi(n);
    if (s.is_zero()) return phi;
    if (n < 7)
        throw std::invalid_argument("integral_relaxation: need n >= 7");

    // Step 0: |sum s| / 3 uniform random triangles, signed like the total.
    const std::int64_t tot = s.total();
    const int sgn0 = tot >= 0 ? 1 : -1;
    for (std::int64_t k = 0; k < std::abs(tot) / 3; ++k) {
        int a = static_cast<int>(rng.below(n)), b, c;
        do { b = static_cast<int>(rng.below(n)); } while (b == a);
        do { c = static_cast<int>(rng.below(n)); } while (c == a || c == b);
        phi.addw(Triple::make(a, b, c), sgn0);
    }

    // Step 1: fix the vertex sums of j0 = s - d2(phi0) with paired triangles
    // sharing a random base edge.
    IntGraph j0 = s - boundary2(phi);
    std::vector<std::int64_t> jstar = boundary1(j0);
    std::vector<int> plus, minus; // vertex listed |j*_v| / 2 times
    for (int v = 0; v < n; ++v) {
        if (jstar[v] % 2 != 0)
            throw std::logic_error("integral_relaxation: odd vertex sum");
        for (std::int64_t k = 0; k < std::abs(jstar[v]) / 2; ++k)
            (jstar[v] > 0 ? plus : minus).push_back(v);
    }
    if (plus.size() != minus.size())
        throw std::logic_error("integral_relaxation: unbalanced vertex sums");
    for (std::size_t i = 0; i < plus.size(); ++i) {
        const int xp = plus[i], xm = minus[i];
        int a, b;
        do { a = static_cast<int>(rng.below(n)); } while (a == xp || a == xm);
        do { b = static_cast<int>(rng.below(n)); } while (b == xp || b == xm || b == a);
        // A positive triangle at the excess-positive vertex lowers its
        // vertex sum by 2 (j loses the triangle boundary); the negative
        // twin at xm raises its sum; the shared base edge ab cancels.
        phi.addw(Triple::make(xp, a, b), 1);
        phi.addw(Triple::make(xm, a, b), -1);
    }

    // Step 2: walks -> four-cycles -> cones from random apexes.
    IntGraph j1 = s - boundary2(phi);
    for (const SignedWalk& walk : extract_signed_walks(j1)) {
        for (const SignedFourCycle& c : walk_to_four_cycles(walk)) {
            int apex;
            do {
                apex = static_cast<int>(rng.below(n));
            } while (apex == c.v[0] || apex == c.v[1] || apex == c.v[2] ||
                     apex == c.v[3]);
            phi.addw(Triple::make(apex, c.v[0], c.v[1]), c.sign);
            phi.addw(Triple::make(apex, c.v[1], c.v[2]), -c.sign);
            phi.addw(Triple::make(apex, c.v[2], c.v[3]), c.sign);
            phi.addw(Triple::make(apex, c.v[3], c.v[0]), -c.sign);
        }
    }
    if (!(boundary2(phi) == s))
        throw std::logic_error("integral_relaxation: boundary mismatch");
    return phi;
}

namespace {

struct HElem {
    Triple t;
    int sign = 1;
    bool near = false;
    Edge old_edge; // valid iff near
    bool alive = true;
};

std::optional<HoleResult> try_hole(const std::vector<std::pair<Triple, int>>& originals,
                                   const IntGraph& s_vec, const Graph& gstar,
                                   const Graph& phi_plus_support,
                                   const HoleConfig& cfg, Rng& rng) {
    const int n = gstar.n();
    HoleResult res;
    res.Gamma = Graph(n);
    res.GammaPrime = Graph(n);
    std::unordered_set<std::uint32_t> forbidden; // old support + new edges
    phi_plus_support.for_each_edge([&](Edge e) { forbidden.insert(e.key()); });
    std::vector<HElem> elems;

    // Phase I: replace every original signed triangle by an octahedron with
    // three fresh vertices; nine new edges inside gstar, avoiding the
    // 2-shadow of Phi^+ and all earlier new edges.
    for (const auto& [f, sgn] : originals) {
        bool placed = false;
        for (std::uint64_t trial = 0; trial < cfg.budget && !placed; ++trial) {
            int d, e, gv;
            d = static_cast<int>(rng.below(n));
            e = static_cast<int>(rng.below(n));
            gv = static_cast<int>(rng.below(n));
            Octahedron omega;
            omega.part = {{{f.a, d}, {f.b, e}, {f.c, gv}}};
            if (!omega.distinct_vertices()) continue;
            bool ok = true;
            for (const Edge& ne : omega.edges_outside(0))
                if (!gstar.has(ne) || forbidden.count(ne.key())) { ok = false; break; }
            if (!ok) continue;
            for (const Edge& ne : omega.edges_outside(0)) {
                forbidden.insert(ne.key());
                res.Gamma.add(ne);
            }
            for (int x = 1; x < 8; ++x) {
                HElem el;
                el.t = omega.triangle(x);
                el.sign = -sgn * Octahedron::sign(x);
                el.near = (x == 1 || x == 2 || x == 4);
                if (el.near)
                    el.old_edge = x == 1   ? Edge::make(f.b, f.c)
                                  : x == 2 ? Edge::make(f.a, f.c)
                                           : Edge::make(f.a, f.b);
                elems.push_back(el);
            }
            placed = true;
        }
        if (!placed) return std::nullopt;
    }

    // Pairing: on each old edge, match negative carriers with positive
    // ones; the excess (exactly s_e) survives.
    std::map<std::uint32_t, std::pair<std::vector<int>, std::vector<int>>> by_edge;
    for (int i = 0; i < static_cast<int>(elems.size()); ++i) {
        if (!elems[i].near) continue;
        auto& [pos, neg] = by_edge[elems[i].old_edge.key()];
        (elems[i].sign > 0 ? pos : neg).push_back(i);
    }
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [ekey, lists] : by_edge) {
        const auto& [pos, neg] = lists;
        const std::int64_t se = s_vec.get(Edge::from_key(ekey));
        if (static_cast<std::int64_t>(pos.size()) - static_cast<std::int64_t>(neg.size()) != se)
            throw std::logic_error("hole elimination: carrier imbalance mismatch");
        for (std::size_t k = 0; k < neg.size(); ++k) pairs.emplace_back(pos[k], neg[k]);
    }

    // Phase II: eliminate each pair via an octahedron on the shared edge;
    // seven new edges in gstar avoiding Phi^+, Gamma and earlier new edges.
    for (const auto& [ip, in] : pairs) {
        const Triple fpt = elems[ip].t;
        const Triple fnt = elems[in].t;
        const Edge e = elems[ip].old_edge;
        const int wp = fpt.a + fpt.b + fpt.c - e.u - e.v;
        const int wn = fnt.a + fnt.b + fnt.c - e.u - e.v;
        if (wp == wn) throw std::logic_error("hole elimination: twin carriers");
        bool placed = false;
        for (std::uint64_t trial = 0; trial < cfg.budget && !placed; ++trial) {
            const int p = static_cast<int>(rng.below(n));
            const int q = static_cast<int>(rng.below(n));
            Octahedron omega;
            omega.part = {{{e.u, p}, {e.v, q}, {wp, wn}}};
            if (!omega.distinct_vertices()) continue;
            bool ok = true;
            std::vector<Edge> new_edges;
            for (const Edge& ed : omega.all_edges()) {
                if (fpt.contains_edge(ed) || fnt.contains_edge(ed)) continue;
                if (!gstar.has(ed) || forbidden.count(ed.key())) { ok = false; break; }
                new_edges.push_back(ed);
            }
            if (!ok || new_edges.size() != 7) continue;
            assert(omega.triangle(0) == fpt && omega.triangle(4) == fnt);
            for (const Edge& ed : new_edges) {
                forbidden.insert(ed.key());
                res.GammaPrime.add(ed);
            }
            elems[ip].alive = false;
            elems[in].alive = false;
            for (int x = 1; x < 8; ++x) {
                if (x == 4) continue;
                HElem el;
                el.t = omega.triangle(x);
                el.sign = -Octahedron::sign(x);
                elems.push_back(el);
            }
            placed = true;
        }
        if (!placed) return std::nullopt;
    }

    // Survivors form Psi = Mo - Mi.
    TriangleVec psi(n);
    for (const HElem& el : elems)
        if (el.alive) psi.addw(el.t, el.sign);
    if (!(boundary2(psi) == s_vec))
        throw std::logic_error("hole elimination: boundary not conserved");
    for (const auto& [key, wt] : psi.w) {
        if (wt != 1 && wt != -1) return std::nullopt; // unlucky collision; retry
        const Triple t = Triple::from_key(key);
        for (const Edge& ed : t.edges())
            if (!gstar.has(ed))
                throw std::logic_error("hole elimination: triangle leaves gstar");
        (wt > 0 ? res.Mo : res.Mi).tris.push_back(t);
    }
    res.Mo.sort_canonical();
    res.Mi.sort_canonical();
    if (!res.Mo.validate_edge_disjoint() || !res.Mi.validate_edge_disjoint())
        return std::nullopt;
    // (s, UMi) partitions UMo.
    Graph expected = res.Mi.edge_union(n);
    bool overlap = false;
    for (const auto& [key, wt] : s_vec.w) {
        const Edge ed = Edge::from_key(key);
        if (expected.has(ed)) overlap = true;
        expected.add(ed);
    }
    if (overlap || !(expected == res.Mo.edge_union(n)))
        return std::nullopt;
    res.mo_boundedness = boundedness_value(res.Mo.edge_union(n));
    res.phi_plus_boundedness = boundedness_value(phi_plus_support);
    return res;
}

} // namespace

HoleResult octahedral_eliminate_hole(const TriangleVec& phi, const Graph& gstar,
                                     const HoleConfig& cfg, Rng& rng) {
    const int n = gstar.n();
    const IntGraph s_vec = boundary2(phi);
    for (const auto& [key, wt] : s_vec.w) {
        if (wt < 0 || wt > 1)
            throw std::invalid_argument("hole elimination: boundary must be a 0/1 vector");
        if (!gstar.has(Edge::from_key(key)))
            throw std::invalid_argument("hole elimination: boundary leaves gstar");
    }
    // 2-shadow support of Phi^+ (the simple graph underneath the multigraph).
    Graph phi_plus(n);
    for (const auto& [key, wt] : phi.w)
        if (wt > 0)
            for (const Edge& e : Triple::from_key(key).edges()) phi_plus.add(e);

    std::vector<std::pair<Triple, int>> originals;
    for (const auto& [key, wt] : phi.w) {
        const Triple t = Triple::from_key(key);
        for (std::int64_t k = 0; k < std::abs(wt); ++k)
            originals.emplace_back(t, wt > 0 ? 1 : -1);
    }

    const std::uint64_t base = rng.next();
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        Rng attempt_rng(derive_seed(base, "hole-elimination", attempt));
        auto res = try_hole(originals, s_vec, gstar, phi_plus, cfg, attempt_rng);
        if (res) return *res;
    }
    throw StageAbort("hole", "octahedron sampling budget exhausted");
}

} // namespace tridec
