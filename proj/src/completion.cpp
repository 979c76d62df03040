#include "tridec/completion.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace tridec {

namespace {

// Cross-part vertex index pairs of K_{2,2,2}: parts i<j, elements a,b.
struct PartPair {
    int i, ai, j, bj;
};
constexpr PartPair kOctEdges[12] = {
    {0, 0, 1, 0}, {0, 0, 1, 1}, {0, 1, 1, 0}, {0, 1, 1, 1},
    {0, 0, 2, 0}, {0, 0, 2, 1}, {0, 1, 2, 0}, {0, 1, 2, 1},
    {1, 0, 2, 0}, {1, 0, 2, 1}, {1, 1, 2, 0}, {1, 1, 2, 1},
};

} // namespace

std::array<Edge, 12> Octahedron::all_edges() const {
    std::array<Edge, 12> out;
    for (int k = 0; k < 12; ++k) {
        const PartPair& pp = kOctEdges[k];
        out[k] = Edge::make(part[pp.i][pp.ai], part[pp.j][pp.bj]);
    }
    return out;
}

std::vector<Edge> Octahedron::edges_outside(int base) const {
    const Triple bt = triangle(base);
    std::vector<Edge> out;
    out.reserve(9);
    for (const Edge& e : all_edges())
        if (!bt.contains_edge(e)) out.push_back(e);
    assert(out.size() == 9);
    return out;
}

bool Octahedron::edges_in(const Graph& g) const {
    for (const Edge& e : all_edges())
        if (!g.has(e)) return false;
    return true;
}

bool Octahedron::distinct_vertices() const {
    std::array<int, 6> v = {part[0][0], part[0][1], part[1][0],
                            part[1][1], part[2][0], part[2][1]};
    std::sort(v.begin(), v.end());
    if (v[0] < 0) return false;
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

TriangleVec Octahedron::signed_vec(int n) const {
    TriangleVec out(n);
    for (int x = 0; x < 8; ++x) out.addw(triangle(x), sign(x));
    return out;
}

std::optional<Octahedron> is_octahedral(Triple z, const Graph& g, const Template& tpl) {
    const std::array<int, 3> zv = {z.a, z.b, z.c};
    std::array<FieldElem, 3> l;
    for (int i = 0; i < 3; ++i) l[i] = tpl.label(zv[i]);
    const FieldElem sigma = l[0] ^ l[1] ^ l[2];
    if (sigma == 0) return std::nullopt;
    Octahedron oct;
    for (int i = 0; i < 3; ++i) {
        const int partner = tpl.vertex_of_label(l[i] ^ sigma); // l_j ^ l_k
        if (partner < 0) return std::nullopt;
        oct.part[i] = {zv[i], partner};
    }
    if (!oct.distinct_vertices()) return std::nullopt;
    if (!oct.edges_in(g)) return std::nullopt;
    return oct;
}

std::vector<Edge> Shuffle::all_edges() const {
    std::vector<Edge> out;
    out.reserve(192);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int ka = 0; ka < 8; ++ka)
                for (int kb = 0; kb < 8; ++kb)
                    out.push_back(Edge::make(parts[i][ka], parts[j][kb]));
    return out;
}

Octahedron Shuffle::target_octahedron(const Template& tpl) const {
    auto oct = is_octahedral(z, graph(static_cast<int>(tpl.pi.size())), tpl);
    assert(oct.has_value());
    return *oct;
}

Graph Shuffle::graph(int n) const {
    Graph g(n);
    for (const Edge& e : all_edges()) g.add(e);
    return g;
}

std::vector<Edge> Shuffle::new_edges(const Template& tpl) const {
    const Octahedron oct = target_octahedron(tpl);
    std::set<std::uint32_t> oct_keys;
    for (const Edge& e : oct.all_edges()) oct_keys.insert(e.key());
    std::vector<Edge> out;
    out.reserve(180);
    for (const Edge& e : all_edges())
        if (!oct_keys.count(e.key())) out.push_back(e);
    assert(out.size() == 180);
    return out;
}

namespace {

// Shared core of the candidate check and shuffle construction.
bool build_shuffle_parts(const std::array<FieldElem, 3>& zl,
                         std::array<FieldElem, 2> tc, const Template& tpl,
                         Shuffle* out) {
    const std::array<FieldElem, 3> t = {tc[0], tc[1], FieldElem(tc[0] ^ tc[1])};
    std::array<FieldElem, 3> x;
    for (int i = 0; i < 3; ++i) x[i] = zl[i] ^ t[i];
    if (!is_independent({x[0], x[1], x[2], t[0], t[1]})) return false;
    const std::vector<FieldElem> sp = span({x[0], x[1], x[2]});
    std::array<std::array<int, 8>, 3> parts;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 8; ++k) {
            const int v = tpl.vertex_of_label(t[i] ^ sp[k]);
            if (v < 0) return false;
            parts[i][k] = v;
        }
    // Independence makes the three cosets disjoint and the 24 labels
    // distinct; pi is injective, so the vertices are distinct too.
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int ka = 0; ka < 8; ++ka)
                for (int kb = 0; kb < 8; ++kb)
                    if (!tpl.Gstar.has(parts[i][ka], parts[j][kb])) return false;
    if (out) {
        out->x = x;
        out->t = t;
        out->coset = sp;
        out->parts = parts;
    }
    return true;
}

bool new_edges_clear(const Shuffle& s, const Template& tpl, const Graph* used,
                     const Graph* delta) {
    if (!used && !delta) return true;
    for (const Edge& e : s.new_edges(tpl)) {
        if (used && used->has(e)) return false;
        if (delta && delta->has(e)) return false;
    }
    return true;
}

} // namespace

bool check_shuffle_candidate(const std::array<FieldElem, 3>& zl,
                             std::array<FieldElem, 2> t, const Template& tpl,
                             const Graph* used, const Graph* delta) {
    Shuffle s;
    if (!build_shuffle_parts(zl, t, tpl, &s)) return false;
    if (!used && !delta) return true;
    const int v0 = tpl.vertex_of_label(zl[0]);
    const int v1 = tpl.vertex_of_label(zl[1]);
    const int v2 = tpl.vertex_of_label(zl[2]);
    if (v0 < 0 || v1 < 0 || v2 < 0) return false;
    s.z = Triple::make(v0, v1, v2);
    return new_edges_clear(s, tpl, used, delta);
}

std::optional<Shuffle> make_shuffle(Triple z, std::array<FieldElem, 2> t,
                                    const Template& tpl, const Graph* used,
                                    const Graph* delta) {
    const std::array<FieldElem, 3> zl = {tpl.label(z.a), tpl.label(z.b),
                                         tpl.label(z.c)};
    Shuffle s;
    s.z = z;
    if (!build_shuffle_parts(zl, t, tpl, &s)) return std::nullopt;
    if (!new_edges_clear(s, tpl, used, delta)) return std::nullopt;
    return s;
}

Shuffle find_shuffle(Triple z, const Template& tpl, const Graph& used,
                     const Graph& delta, std::uint64_t budget, Rng& rng) {
    if (!is_octahedral(z, tpl.Gstar, tpl))
        throw std::invalid_argument("find_shuffle: target is not octahedral");
    const std::uint64_t field = std::uint64_t(1) << tpl.a;
    for (std::uint64_t k = 1; k <= budget; ++k) {
        const std::array<FieldElem, 2> t = {FieldElem(rng.below(field)),
                                            FieldElem(rng.below(field))};
        auto s = make_shuffle(z, t, tpl, &used, &delta);
        if (s) {
            s->accepted_after = k;
            return *s;
        }
    }
    throw StageAbort("shuffle",
                     "no valid shuffle for target " + std::to_string(z.a) + "," +
                         std::to_string(z.b) + "," + std::to_string(z.c) +
                         " within budget");
}

ShufflePair shuffle_decompositions(const Shuffle& s, const Template& tpl) {
    const FieldElem sigma = s.x[0] ^ s.x[1] ^ s.x[2];
    ShufflePair out;
    // Label of parts[i][k] is t_i ^ coset[k]; position of a label within a
    // part is found through the span index.
    std::map<FieldElem, int> pos;
    for (int k = 0; k < 8; ++k) pos[s.coset[k]] = k;
    for (int ka = 0; ka < 8; ++ka)
        for (int kb = 0; kb < 8; ++kb) {
            // y1 = t1^coset[ka], y2 = t2^coset[kb]; zero-sum third point is
            // y1^y2 = t3 ^ (coset[ka]^coset[kb]), inside part 3's coset.
            const int kc = pos.at(s.coset[ka] ^ s.coset[kb]);
            out.m3.tris.push_back(Triple::make(s.parts[0][ka], s.parts[1][kb],
                                               s.parts[2][kc]));
            const int kd = pos.at(s.coset[ka] ^ s.coset[kb] ^ sigma);
            out.m4.tris.push_back(Triple::make(s.parts[0][ka], s.parts[1][kb],
                                               s.parts[2][kd]));
        }
    out.m3.sort_canonical();
    out.m4.sort_canonical();
    return out;
}

ShuffleRunResult run_shuffle_algorithm(const Matching& m2, const Template& tpl,
                                       const Graph& delta,
                                       const CompletionConfig& cfg, Rng& rng) {
    const int n = tpl.Gstar.n();
    ShuffleRunResult out;
    Graph used(n);
    Matching targets = m2;
    targets.sort_canonical();
    for (const Triple& z : targets.tris) {
        if (!is_octahedral(z, tpl.Gstar, tpl))
            throw StageAbort("shuffle", "m2 contains a non-octahedral triangle");
        Shuffle s = find_shuffle(z, tpl, used, delta, cfg.budget, rng);
        for (const Edge& e : s.new_edges(tpl)) used.add(e);
        ShufflePair pair = shuffle_decompositions(s, tpl);
        for (const Triple& t : pair.m3.tris) {
            if (!tpl.is_template(t))
                throw StageAbort("shuffle", "zero-sum shuffle triangle not in template");
            out.M3.tris.push_back(t);
        }
        for (const Triple& t : pair.m4.tris) out.M4.tris.push_back(t);
        out.shuffles.push_back(std::move(s));
    }
    out.M3.sort_canonical();
    out.M4.sort_canonical();
    if (!out.M3.validate_edge_disjoint() || !out.M4.validate_edge_disjoint())
        throw StageAbort("shuffle", "shuffle decompositions overlap");
    if (out.M3.edge_union(n) != out.M4.edge_union(n))
        throw StageAbort("shuffle", "UM3 != UM4");
    for (const Triple& z : targets.tris)
        if (!out.M4.contains(z)) throw StageAbort("shuffle", "m2 not inside M4");
    return out;
}

LinearBound linear_bound_values(const Graph& j, const std::vector<FieldElem>& labels) {
    LinearBound lb;
    if (j.n() == 0) return lb;
    lb.bounded_value = boundedness_value(j);
    std::unordered_map<FieldElem, std::int64_t> line;
    j.for_each_edge([&](Edge e) { ++line[labels[e.u] ^ labels[e.v]]; });
    for (const auto& [diff, cnt] : line) lb.max_line = std::max(lb.max_line, cnt);
    return lb;
}

bool linear_boundedness(const Graph& j, const std::vector<FieldElem>& labels,
                        double c, int a) {
    const LinearBound lb = linear_bound_values(j, labels);
    return lb.bounded_value < c &&
           static_cast<double>(lb.max_line) < c * std::ldexp(1.0, a);
}

namespace {

// Working element of the elimination: a signed triangle of the evolving
// vector, with its carried old edge (for near elements) and the associated
// octahedron (for elements that may end up in M2).
struct Elem {
    Triple t;
    int sign = 1;
    bool near = false;  // shares two vertices with an original triangle
    Edge old_edge;      // valid iff near
    bool alive = true;
    std::optional<Octahedron> oct; // associated octahedron when known
};

struct EdgeSet {
    std::unordered_set<std::uint32_t> keys;
    bool has(Edge e) const { return keys.count(e.key()) > 0; }
    void add(Edge e) { keys.insert(e.key()); }
};

// Expand a triangle vector into one signed element per unit of weight,
// canonical order.
std::vector<std::pair<Triple, int>> expand_elements(const TriangleVec& phi) {
    std::vector<std::pair<Triple, int>> out;
    for (const auto& [key, wt] : phi.w) {
        const Triple t = Triple::from_key(key);
        const int s = wt > 0 ? 1 : -1;
        for (std::int64_t k = 0; k < std::abs(wt); ++k) out.emplace_back(t, s);
    }
    return out;
}

// One attempt at the full completion elimination; returns nullopt when a
// sampling budget is exhausted (caller retries with a fresh seed).
std::optional<Psi> try_completion(const std::vector<std::pair<Triple, int>>& originals,
                                  const IntGraph& leave_vec, const Graph& leave,
                                  const EdgeSet& old_support, const Template& tpl,
                                  const CompletionConfig& cfg, Rng& rng) {
    const int n = tpl.Gstar.n();
    const std::uint64_t field = std::uint64_t(1) << tpl.a;
    Psi psi;
    psi.Gamma = Graph(n);
    psi.GammaPrime = Graph(n);
    EdgeSet forbidden = old_support; // old edges plus accumulated new edges
    leave.for_each_edge([&](Edge e) { forbidden.add(e); });
    std::vector<Elem> elems;

    // Phase I: replace every original signed triangle by an extended
    // octahedral configuration whose far triangles are octahedral.
    for (const auto& [f, sgn] : originals) {
        bool placed = false;
        for (std::uint64_t trial = 0; trial < cfg.budget && !placed; ++trial) {
            std::array<int, 3> free_v;
            bool ok = true;
            std::array<FieldElem, 3> zl;
            for (int i = 0; i < 3 && ok; ++i) {
                zl[i] = FieldElem(rng.below(field));
                free_v[i] = tpl.vertex_of_label(zl[i]);
                ok = free_v[i] >= 0;
            }
            if (!ok) continue;
            Octahedron omega;
            omega.part = {{{f.a, free_v[0]}, {f.b, free_v[1]}, {f.c, free_v[2]}}};
            if (!omega.distinct_vertices()) continue;
            // Local edge set: the configuration's own edges, to enforce
            // that the far octahedra share edges only inside omega.
            EdgeSet local;
            std::vector<Edge> new_edges;
            for (const Edge& e : omega.all_edges()) local.add(e);
            for (const Edge& e : omega.edges_outside(0)) {
                if (!tpl.Gstar.has(e) || forbidden.has(e)) { ok = false; break; }
                new_edges.push_back(e);
            }
            if (!ok) continue;
            // No template triangles besides (possibly) f itself.
            for (int x = 1; x < 8 && ok; ++x)
                if (tpl.is_template(omega.triangle(x))) ok = false;
            if (!ok) continue;
            // The far octahedra partner vertices are label-determined, so
            // octahedra of far triangles sharing an omega edge always share
            // the partner vertices z_i ^ z_j and the edges into them. Those
            // forced overlaps are part of one extended configuration and are
            // deduplicated; accidental label collisions are excluded by the
            // exact distinct-vertex count (6 omega + 9 distinct partners).
            std::array<std::optional<Octahedron>, 8> far_oct;
            std::set<int> cfg_verts;
            for (int j = 0; j < 3; ++j) {
                cfg_verts.insert(omega.part[std::size_t(j)][0]);
                cfg_verts.insert(omega.part[std::size_t(j)][1]);
            }
            for (int x : {3, 5, 6, 7}) {
                far_oct[x] = is_octahedral(omega.triangle(x), tpl.Gstar, tpl);
                if (!far_oct[x]) { ok = false; break; }
                for (int j = 0; j < 3; ++j) {
                    cfg_verts.insert(far_oct[x]->part[std::size_t(j)][0]);
                    cfg_verts.insert(far_oct[x]->part[std::size_t(j)][1]);
                }
                for (const Edge& e : far_oct[x]->edges_outside(0)) {
                    if (local.has(e)) continue; // forced overlap inside the configuration
                    if (forbidden.has(e)) { ok = false; break; }
                    local.add(e);
                    new_edges.push_back(e);
                }
                if (!ok) break;
            }
            if (ok && cfg_verts.size() != 15) ok = false;
            if (!ok) continue;
            for (const Edge& e : new_edges) {
                forbidden.add(e);
                psi.Gamma.add(e);
            }
            for (int x = 1; x < 8; ++x) {
                Elem el;
                el.t = omega.triangle(x);
                el.sign = -sgn * Octahedron::sign(x);
                el.near = (x == 1 || x == 2 || x == 4);
                if (el.near) {
                    // The old edge is the side of f opposite the free vertex.
                    el.old_edge = x == 1   ? Edge::make(f.b, f.c)
                                  : x == 2 ? Edge::make(f.a, f.c)
                                           : Edge::make(f.a, f.b);
                } else {
                    el.oct = far_oct[x];
                }
                elems.push_back(el);
            }
            placed = true;
        }
        if (!placed) return std::nullopt;
    }

    // Pair opposite-sign near elements on each shared old edge; near
    // elements carrying a leave edge stay (they form the leave side of M1).
    std::map<std::uint32_t, std::pair<std::vector<int>, std::vector<int>>> by_edge;
    for (int i = 0; i < static_cast<int>(elems.size()); ++i) {
        if (!elems[i].near) continue;
        auto& [pos, neg] = by_edge[elems[i].old_edge.key()];
        (elems[i].sign > 0 ? pos : neg).push_back(i);
    }
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [ekey, lists] : by_edge) {
        const auto& [pos, neg] = lists;
        const Edge e = Edge::from_key(ekey);
        const std::int64_t lv = leave_vec.get(e);
        if (static_cast<std::int64_t>(pos.size()) - static_cast<std::int64_t>(neg.size()) != lv)
            throw StageAbort("completion", "near-element imbalance mismatch at an old edge");
        for (std::size_t k = 0; k < neg.size(); ++k) pairs.emplace_back(pos[k], neg[k]);
        // Unmatched positives carry leave edges and survive into M1.
        for (std::size_t k = neg.size(); k < pos.size(); ++k)
            if (!leave.has(e))
                throw StageAbort("completion", "unmatched non-leave near element");
    }

    // Phase II: eliminate each pair by an octahedron on their shared edge,
    // with every leftover triangle octahedral.
    for (const auto& [ip, in] : pairs) {
        const Triple fpt = elems[ip].t;
        const Triple fnt = elems[in].t;
        const Edge e = elems[ip].old_edge;
        const int wp = fpt.a + fpt.b + fpt.c - e.u - e.v; // third vertex
        const int wn = fnt.a + fnt.b + fnt.c - e.u - e.v;
        if (wp == wn) throw StageAbort("completion", "paired elements coincide");
        bool placed = false;
        for (std::uint64_t trial = 0; trial < cfg.budget && !placed; ++trial) {
            const int p = tpl.vertex_of_label(FieldElem(rng.below(field)));
            const int q = tpl.vertex_of_label(FieldElem(rng.below(field)));
            if (p < 0 || q < 0) continue;
            Octahedron omega;
            omega.part = {{{e.u, p}, {e.v, q}, {wp, wn}}};
            if (!omega.distinct_vertices()) continue;
            bool ok = true;
            EdgeSet local;
            std::vector<Edge> new_edges;
            for (const Edge& ed : omega.all_edges()) local.add(ed);
            // New omega edges: the seven avoiding both originals.
            for (const Edge& ed : omega.all_edges()) {
                if (fpt.contains_edge(ed) || fnt.contains_edge(ed)) continue;
                if (!tpl.Gstar.has(ed) || forbidden.has(ed)) { ok = false; break; }
                new_edges.push_back(ed);
            }
            if (!ok || new_edges.size() != 7) continue;
            // As in Phase I, label-forced overlaps between the leftover
            // octahedra are deduplicated; accidental collisions are excluded
            // by the exact distinct-vertex count (6 omega + 11 partners).
            std::array<std::optional<Octahedron>, 8> leftover_oct;
            std::set<int> cfg_verts;
            for (int j = 0; j < 3; ++j) {
                cfg_verts.insert(omega.part[std::size_t(j)][0]);
                cfg_verts.insert(omega.part[std::size_t(j)][1]);
            }
            for (int x = 1; x < 8; ++x) {
                if (x == 4) continue; // triangle(4) is the paired original
                leftover_oct[x] = is_octahedral(omega.triangle(x), tpl.Gstar, tpl);
                if (!leftover_oct[x]) { ok = false; break; }
                for (int j = 0; j < 3; ++j) {
                    cfg_verts.insert(leftover_oct[x]->part[std::size_t(j)][0]);
                    cfg_verts.insert(leftover_oct[x]->part[std::size_t(j)][1]);
                }
                for (const Edge& ed : leftover_oct[x]->edges_outside(0)) {
                    if (local.has(ed)) continue; // forced overlap inside the configuration
                    if (forbidden.has(ed)) { ok = false; break; }
                    local.add(ed);
                    new_edges.push_back(ed);
                }
                if (!ok) break;
            }
            if (ok && cfg_verts.size() != 17) ok = false;
            if (!ok) continue;
            // triangle(0) = {e.u, e.v, wp} cancels the positive original,
            // triangle(4) = {e.u, e.v, wn} the negative one: subtract
            // +1 * the signed octahedron vector.
            assert(omega.triangle(0) == fpt && omega.triangle(4) == fnt);
            for (const Edge& ed : new_edges) {
                forbidden.add(ed);
                psi.GammaPrime.add(ed);
            }
            elems[ip].alive = false;
            elems[in].alive = false;
            for (int x = 1; x < 8; ++x) {
                if (x == 4) continue;
                Elem el;
                el.t = omega.triangle(x);
                el.sign = -Octahedron::sign(x);
                el.near = false;
                el.oct = leftover_oct[x];
                elems.push_back(el);
            }
            placed = true;
        }
        if (!placed) return std::nullopt;
    }

    // Collect survivors; verify the boundary and matching structure.
    TriangleVec psi_vec(n);
    for (const Elem& el : elems)
        if (el.alive) psi_vec.addw(el.t, el.sign);
    if (boundary2(psi_vec) != leave_vec)
        throw StageAbort("completion", "elimination changed the boundary");
    for (const auto& [key, wt] : psi_vec.w)
        if (wt != 1 && wt != -1)
            throw StageAbort("completion", "psi has a weight outside {0,+-1}");

    psi.Delta = Graph(n);
    bool delta_disjoint = true;
    std::set<std::uint64_t> seen;
    for (const Elem& el : elems) {
        if (!el.alive) continue;
        if (!seen.insert(el.t.key()).second) continue; // weight checked above
        if (el.sign > 0) {
            psi.M1.tris.push_back(el.t);
        } else {
            psi.M2.tris.push_back(el.t);
            if (!el.oct) throw StageAbort("completion", "m2 element lacks an octahedron");
            for (const Edge& ed : el.oct->all_edges()) {
                if (psi.Delta.has(ed)) delta_disjoint = false;
                psi.Delta.add(ed);
            }
        }
    }
    psi.M1.sort_canonical();
    psi.M2.sort_canonical();
    if (!psi.M1.validate_edge_disjoint() || !psi.M2.validate_edge_disjoint())
        throw StageAbort("completion", "psi parts are not matchings");
    // (L, UM2) partitions UM1.
    const Graph um1 = psi.M1.edge_union(n);
    const Graph um2 = psi.M2.edge_union(n);
    Graph expected = um2;
    bool overlap = false;
    leave.for_each_edge([&](Edge e) {
        if (expected.has(e)) overlap = true;
        expected.add(e);
    });
    if (overlap || um1 != expected)
        throw StageAbort("completion", "(L, UM2) does not partition UM1");

    bool p1 = delta_disjoint;
    for (const Triple& t : psi.M2.tris)
        if (tpl.is_template(t)) p1 = false;
    psi.p1_ok = p1;
    psi.p2 = linear_bound_values(psi.Delta, tpl.pi);

    // P3: max m2 triangles on a basic plane b.z = v over nonzero b.
    std::map<std::pair<int, FieldElem>, std::int64_t> plane;
    for (const Triple& t : psi.M2.tris) {
        const FieldElem l1 = tpl.label(t.a), l2 = tpl.label(t.b), l3 = tpl.label(t.c);
        for (FieldElem v : {l1, l2, l3}) ++plane[{1, v}];
        for (FieldElem v : {FieldElem(l1 ^ l2), FieldElem(l1 ^ l3), FieldElem(l2 ^ l3)})
            ++plane[{2, v}];
        ++plane[{3, FieldElem(l1 ^ l2 ^ l3)}];
    }
    for (const auto& [bv, cnt] : plane)
        psi.p3_max_plane = std::max(psi.p3_max_plane, cnt);
    return psi;
}

} // namespace

Psi eliminate_for_completion(const Matching& mc, const Matching& mi,
                             const Matching& mo, const Graph& leave,
                             const Graph& g, const Template& tpl,
                             const CompletionConfig& cfg, Rng& rng) {
    const int n = g.n();
    TriangleVec phi(n);
    for (const Triple& t : mc.tris) phi.addw(t, 1);
    for (const Triple& t : mi.tris) phi.addw(t, 1);
    for (const Triple& t : mo.tris) phi.addw(t, -1);
    const IntGraph leave_vec = IntGraph::from_graph(leave);
    if (boundary2(phi) != leave_vec)
        throw std::invalid_argument(
            "eliminate_for_completion: boundary of Mc + Mi - Mo is not the leave");

    EdgeSet old_support;
    for (const Matching* m : {&mc, &mi, &mo})
        for (const Triple& t : m->tris)
            for (const Edge& e : t.edges()) old_support.add(e);

    const auto originals = expand_elements(phi);
    const std::uint64_t base = rng.next();
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        Rng attempt_rng(derive_seed(base, "completion-elimination", attempt));
        auto psi = try_completion(originals, leave_vec, leave, old_support, tpl,
                                  cfg, attempt_rng);
        if (psi) return *psi;
    }
    throw StageAbort("completion", "configuration sampling budget exhausted");
}

} // namespace tridec
