#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tridec/graph.hpp"
#include "tridec/rng.hpp"

namespace tridec {

struct TrajectoryRecord {
    std::int64_t step = 0;
    std::int64_t edges = 0;   // remaining edges after this step
    double p = 1.0;           // edges / |G(0)|
    std::int64_t q = 0;       // triangle count after this step
    std::int64_t choices = 0; // available triangles at this step (= q before it)
    bool checkpoint = false;
};

struct DegreeSnapshot {
    double p = 1.0;
    std::vector<int> degrees; // remaining degree per vertex
};

struct TeSample {
    double p = 1.0;
    std::vector<Edge> edges;     // sampled surviving edges
    std::vector<int> codegrees;  // T_e for each
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<DegreeSnapshot> degree_snapshots;
    std::vector<TeSample> te_samples;
    double log_choice_sum = 0.0; // sum of log choices over performed steps
    bool aborted = false;        // ran out of triangles before the stop point
    std::int64_t abort_step = -1;
};

struct RemovalOptions {
    std::vector<double> checkpoints = {0.9, 0.7, 0.5, 0.3};
    std::int64_t recount_interval = 1024; // exact triangle recount cadence
    int te_sample_count = 64;
    bool record_steps = true; // per-step trajectory rows
};

struct RemovalResult {
    Matching N;  // removed triangles in order
    Graph leave; // remaining graph
    Trajectory trajectory;
};

// Deletes the edges of a uniformly random triangle until `stop_edges` edges
// remain (or no triangle survives, which marks the trajectory aborted).
// Precondition: stop_edges <= |G| and stop_edges == |G| mod 3.
RemovalResult run_triangle_removal(const Graph& g, std::int64_t stop_edges, Rng& rng,
                                   const RemovalOptions& opts = {});

// Random triangle removal run until the remaining graph is b^{1/4}-bounded
// (max degree < b^{1/4} n) or triangle-free; retries with derived seeds if
// the leave fails the bound. Throws StageAbort when retries are exhausted.
RemovalResult nibble(const Graph& g, double b, Rng& rng, int max_retries = 20);

struct GraphStats {
    int n = 0;
    std::int64_t edges = 0; // |G| at the start of the process
    double d = 0.0;         // density
    double cap_d = 0.0;     // D = d^2 n
};
GraphStats graph_stats(const Graph& g);

struct EnvelopeEntry {
    double p = 1.0;
    // Triangle count envelope: |Q - |G|Dp^3/3| < e_q.
    std::int64_t q_observed = 0;
    double q_predicted = 0.0, q_slack = 0.0;
    bool q_ok = false;
    // Codegree envelope on sampled edges: T_e = Dp^2 +- e_d (mean over sample).
    double te_mean = 0.0, te_predicted = 0.0, te_slack = 0.0;
    bool te_ok = false;
    // Degree envelope: |G_i(v)| = p|G(v)| +- e_v for every vertex.
    double deg_max_abs_dev = 0.0, deg_slack = 0.0;
    bool deg_ok = false;
};

struct EnvelopeReport {
    std::vector<EnvelopeEntry> entries;
    bool all_ok = false;
};

// Evaluates the three concentration envelopes (with slacks
// e_q = 2(1-3log p)^2 b |G| D, e_d = 2(1-3log p) b^{2/3} D,
// e_v = 2 b^{1/3} d n, D = d^2 n) at every recorded checkpoint.
EnvelopeReport check_trajectory(const Trajectory& traj, double b, const GraphStats& gs);

struct CoverResult {
    Matching Mc;
    Graph spill; // gstar edges used by Mc
};

// Covers each leave edge (canonical order) by a triangle whose other two
// edges lie in gstar and are unused by earlier choices, picked uniformly.
// Precondition: leave and gstar edge-disjoint. Throws StageAbort when some
// edge has no available triangle after max_retries stage restarts.
CoverResult cover_leave(const Graph& leave, const Graph& gstar, Rng& rng,
                        int max_retries = 20);

// CSV: step,edges,p,Q,choices,checkpoint.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

} // namespace tridec
