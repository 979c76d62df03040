#include "tridec/greedy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "tridec/completion.hpp" // StageAbort

namespace tridec {

namespace {

// Live edge list with O(1) uniform sampling and deletion.
struct EdgePool {
    std::vector<Edge> list;
    std::unordered_map<std::uint32_t, std::size_t> pos;

    explicit EdgePool(const Graph& g) {
        list = g.edges();
        pos.reserve(list.size() * 2);
        for (std::size_t i = 0; i < list.size(); ++i) pos[list[i].key()] = i;
    }
    void remove(Edge e) {
        auto it = pos.find(e.key());
        assert(it != pos.end());
        const std::size_t i = it->second;
        pos.erase(it);
        if (i + 1 != list.size()) {
            list[i] = list.back();
            pos[list[i].key()] = i;
        }
        list.pop_back();
    }
    Edge sample(Rng& rng) const { return list[rng.below(list.size())]; }
};

// Uniform random triangle of h. Rejection sampling (edge + third vertex) is
// exactly uniform: each triangle is hit by 3 of the |E|*n candidate pairs.
// Falls back to full enumeration when the acceptance rate is tiny.
bool sample_triangle(const Graph& h, const EdgePool& pool, Rng& rng, Triple& out) {
    const int n = h.n();
    for (int trial = 0; trial < 200000; ++trial) {
        const Edge e = pool.sample(rng);
        const int w = static_cast<int>(rng.below(n));
        if (w == e.u || w == e.v) continue;
        if (h.has(e.u, w) && h.has(e.v, w)) {
            out = Triple::make(e.u, e.v, w);
            return true;
        }
    }
    std::vector<Triple> all;
    for (const Edge& e : pool.list)
        for (int w : h.common_neighbor_list(e.u, e.v))
            if (w > e.v) all.push_back(Triple::make(e.u, e.v, w));
    if (all.empty()) return false;
    out = all[rng.below(all.size())];
    return true;
}

void take_checkpoint(Trajectory& traj, const Graph& h, const EdgePool& pool,
                     double p, int sample_count, Rng& rng) {
    DegreeSnapshot ds;
    ds.p = p;
    ds.degrees.resize(h.n());
    for (int v = 0; v < h.n(); ++v) ds.degrees[v] = h.degree(v);
    traj.degree_snapshots.push_back(std::move(ds));

    TeSample ts;
    ts.p = p;
    if (!pool.list.empty()) {
        for (int k = 0; k < sample_count; ++k) {
            const Edge e = pool.list[rng.below(pool.list.size())];
            ts.edges.push_back(e);
            ts.codegrees.push_back(h.codegree(e.u, e.v));
        }
    }
    traj.te_samples.push_back(std::move(ts));
}

// Shared engine: removes uniform random triangles until stop(h) holds or no
// triangle survives. Records the trajectory and the checkpoint snapshots.
template <class Stop>
RemovalResult removal_engine(const Graph& g, Rng& rng, const RemovalOptions& opts,
                             Stop&& stop) {
    RemovalResult res;
    res.leave = g;
    Graph& h = res.leave;
    EdgePool pool(h);
    const double m0 = static_cast<double>(std::max<std::int64_t>(1, g.edge_count()));
    std::int64_t q = count_triangles(h);

    std::vector<double> cps = opts.checkpoints;
    std::sort(cps.begin(), cps.end(), std::greater<double>());
    std::size_t next_cp = 0;

    // Baseline snapshot at p = 1 (degree envelope reference).
    take_checkpoint(res.trajectory, h, pool, 1.0, opts.te_sample_count, rng);

    std::int64_t step = 0;
    while (!stop(h, q)) {
        if (q == 0) {
            res.trajectory.aborted = true;
            res.trajectory.abort_step = step;
            break;
        }
        Triple t;
        if (!sample_triangle(h, pool, rng, t)) {
            res.trajectory.aborted = true;
            res.trajectory.abort_step = step;
            break;
        }
        // Triangles destroyed by deleting t's edges, by inclusion-exclusion
        // on which of the three edges a triangle uses (computed before the
        // deletion): pairs of edges meet only in t itself.
        const std::int64_t removed = h.codegree(t.a, t.b) + h.codegree(t.a, t.c)
                                   + h.codegree(t.b, t.c) - 2;
        const std::int64_t choices = q;
        for (const Edge& e : t.edges()) {
            h.remove(e);
            pool.remove(e);
        }
        q -= removed;
        res.N.tris.push_back(t);
        res.trajectory.log_choice_sum += std::log(static_cast<double>(choices));
        ++step;

        if (opts.recount_interval > 0 && step % opts.recount_interval == 0) {
            const std::int64_t exact = count_triangles(h);
            if (exact != q)
                throw std::logic_error("triangle removal: incremental count drifted");
        }

        const double p = static_cast<double>(h.edge_count()) / m0;
        const bool at_cp = next_cp < cps.size() && p <= cps[next_cp];
        if (opts.record_steps || at_cp) {
            TrajectoryRecord r;
            r.step = step;
            r.edges = h.edge_count();
            r.p = p;
            r.q = q;
            r.choices = choices;
            r.checkpoint = at_cp;
            res.trajectory.records.push_back(r);
        }
        if (at_cp) {
            take_checkpoint(res.trajectory, h, pool, p, opts.te_sample_count, rng);
            ++next_cp;
        }
    }
    return res;
}

} // namespace

RemovalResult run_triangle_removal(const Graph& g, std::int64_t stop_edges, Rng& rng,
                                   const RemovalOptions& opts) {
    if (stop_edges < 0 || stop_edges > g.edge_count())
        throw std::invalid_argument("run_triangle_removal: bad stop_edges");
    if ((g.edge_count() - stop_edges) % 3 != 0)
        throw std::invalid_argument("run_triangle_removal: stop_edges must match |G| mod 3");
    return removal_engine(g, rng, opts,
                          [&](const Graph& h, std::int64_t) {
                              return h.edge_count() <= stop_edges;
                          });
}

RemovalResult nibble(const Graph& g, double b, Rng& rng, int max_retries) {
    if (b <= 0.0) throw std::invalid_argument("nibble: b must be positive");
    // Remove (1 - b^{1/4})|G|/3 triangles, i.e. run down to ~b^{1/4}|G|
    // edges (rounded up to keep the removed count a multiple of 3), then
    // verify the leave is b^{1/4}-bounded.
    const double c1 = std::pow(b, 0.25);
    std::int64_t stop = static_cast<std::int64_t>(c1 * g.edge_count());
    stop = std::min(stop, g.edge_count());
    while (stop > 0 && (g.edge_count() - stop) % 3 != 0) --stop;
    if ((g.edge_count() - stop) % 3 != 0) stop = g.edge_count() % 3;
    const double bound = c1 * g.n();
    RemovalOptions opts;
    opts.record_steps = false;
    const std::uint64_t base = rng.next();
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Rng attempt_rng(derive_seed(base, "nibble", attempt));
        RemovalResult res = removal_engine(
            g, attempt_rng, opts,
            [&](const Graph& h, std::int64_t) {
                return h.edge_count() <= stop;
            });
        if (res.leave.max_degree() < bound) {
            res.trajectory.aborted = false;
            res.trajectory.abort_step = -1;
            return res;
        }
    }
    throw StageAbort("nibble", "leave never met the degree bound");
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.n = g.n();
    s.edges = g.edge_count();
    s.d = density(g).value();
    s.cap_d = s.d * s.d * g.n();
    return s;
}

EnvelopeReport check_trajectory(const Trajectory& traj, double b, const GraphStats& gs) {
    EnvelopeReport rep;
    rep.all_ok = true;
    if (traj.degree_snapshots.empty()) return rep;
    const std::vector<int>& deg0 = traj.degree_snapshots.front().degrees;
    const double m = static_cast<double>(gs.edges);
    const double cap_d = gs.cap_d;

    // Checkpoint rows in order; snapshot i+1 matches checkpoint record i.
    std::vector<const TrajectoryRecord*> cps;
    for (const auto& r : traj.records)
        if (r.checkpoint) cps.push_back(&r);

    for (std::size_t i = 0; i + 1 < traj.degree_snapshots.size(); ++i) {
        const DegreeSnapshot& ds = traj.degree_snapshots[i + 1];
        const TeSample& ts = traj.te_samples[i + 1];
        const double p = ds.p;
        const double lp = 1.0 - 3.0 * std::log(p);
        EnvelopeEntry e;
        e.p = p;

        e.q_predicted = m * cap_d * p * p * p / 3.0;
        e.q_slack = 2.0 * lp * lp * b * m * cap_d;
        if (i < cps.size()) {
            e.q_observed = cps[i]->q;
            e.q_ok = std::abs(static_cast<double>(e.q_observed) - e.q_predicted) < e.q_slack;
        }

        e.te_predicted = cap_d * p * p;
        e.te_slack = 2.0 * lp * std::pow(b, 2.0 / 3.0) * cap_d;
        if (!ts.codegrees.empty()) {
            double s = 0.0;
            for (int c : ts.codegrees) s += c;
            e.te_mean = s / static_cast<double>(ts.codegrees.size());
            e.te_ok = std::abs(e.te_mean - e.te_predicted) < e.te_slack;
        }

        e.deg_slack = 2.0 * std::cbrt(b) * gs.d * gs.n;
        for (std::size_t v = 0; v < ds.degrees.size(); ++v)
            e.deg_max_abs_dev = std::max(e.deg_max_abs_dev,
                                         std::abs(ds.degrees[v] - p * deg0[v]));
        e.deg_ok = e.deg_max_abs_dev < e.deg_slack;

        rep.all_ok = rep.all_ok && e.q_ok && e.te_ok && e.deg_ok;
        rep.entries.push_back(e);
    }
    return rep;
}

CoverResult cover_leave(const Graph& leave, const Graph& gstar, Rng& rng,
                        int max_retries) {
    const int n = gstar.n();
    leave.for_each_edge([&](Edge e) {
        if (gstar.has(e))
            throw std::invalid_argument("cover_leave: leave meets gstar");
    });
    const std::vector<Edge> order = leave.edges();
    const std::uint64_t base = rng.next();
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Rng attempt_rng(derive_seed(base, "cover", attempt));
        CoverResult res;
        res.spill = Graph(n);
        bool ok = true;
        for (const Edge& e : order) {
            std::vector<int> cands;
            for (int w : gstar.common_neighbor_list(e.u, e.v))
                if (!res.spill.has(e.u, w) && !res.spill.has(e.v, w))
                    cands.push_back(w);
            if (cands.empty()) { ok = false; break; }
            const int w = cands[attempt_rng.below(cands.size())];
            res.spill.add(e.u, w);
            res.spill.add(e.v, w);
            res.Mc.tris.push_back(Triple::make(e.u, e.v, w));
        }
        if (ok) return res;
    }
    throw StageAbort("cover", "some leave edge has no available triangle");
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "step,edges,p,Q,choices,checkpoint\n";
    for (const auto& r : traj.records)
        out << r.step << ',' << r.edges << ',' << r.p << ',' << r.q << ','
            << r.choices << ',' << (r.checkpoint ? 1 : 0) << '\n';
}

} // namespace tridec
