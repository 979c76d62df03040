#pragma once

#include <array>
#include <vector>

#include "tridec/graph.hpp"
#include "tridec/rng.hpp"

namespace tridec {

// Closed walk of even length with edge weights alternating +-1; edge
// (verts[i], verts[i+1 mod 2m]) has sign first_sign * (-1)^i, so the first
// and last edges have opposite signs.
struct SignedWalk {
    std::vector<int> verts;
    int first_sign = 1;

    int length() const { return static_cast<int>(verts.size()); }
    IntGraph to_intgraph(int n) const;
};

// sign * ({v0v1} - {v1v2} + {v2v3} - {v3v0}).
struct SignedFourCycle {
    std::array<int, 4> v{};
    int sign = 1;

    IntGraph to_intgraph(int n) const;
};

// Exact decomposition of a vertex-balanced signed edge vector into
// alternating closed walks with no cancellation (every edge keeps the sign
// it has in j). Preconditions: all vertex sums of j are zero.
std::vector<SignedWalk> extract_signed_walks(const IntGraph& j);

// Writes a closed alternating walk of length 2m as m-1 signed four-cycles
// by the chain identity, with the degenerate-position replacement; falls
// back to peeling a leading four-cycle from a rotation when no orientation
// admits the chain. The signed sum equals the walk exactly.
std::vector<SignedFourCycle> walk_to_four_cycles(const SignedWalk& w);

// Builds Phi = Phi0 + Phi1 + Phi2 with edge boundary exactly s:
// Step 0 takes |sum s|/3 uniform random triangles, Step 1 fixes vertex
// sums by paired triangles sharing a random base edge, Step 2 decomposes
// the remainder into alternating walks, then four-cycles, then cones each
// four-cycle from a uniform random apex. Precondition: s tridivisible.
TriangleVec integral_relaxation(const IntGraph& s, int n, Rng& rng);

struct HoleConfig {
    std::uint64_t budget = 20000; // candidate samples per greedy step
    int max_retries = 20;         // whole-stage restarts
    double c2 = 0.0, c3 = 0.0;    // boundedness report targets (0 = unset)
};

struct HoleResult {
    Matching Mo, Mi;
    Graph Gamma;      // Phase I new edges
    Graph GammaPrime; // Phase II new edges
    double mo_boundedness = 0.0;       // boundedness value of UMo
    double phi_plus_boundedness = 0.0; // boundedness value of the 2-shadow of Phi^+
};

// Two-phase octahedral elimination for the hole stage. Phase I replaces
// every signed triangle of phi by an octahedron whose nine new edges lie in
// gstar, avoid the 2-shadow of Phi^+ and all earlier new edges; Phase II
// eliminates opposite-sign pairs sharing an old edge until only the
// s-carriers remain. Result: Mo and Mi edge-disjoint triangle sets in gstar
// with (s, UMi) a partition of UMo, where s is the edge boundary of phi
// (required to be a 0/1 vector supported inside gstar).
HoleResult octahedral_eliminate_hole(const TriangleVec& phi, const Graph& gstar,
                                     const HoleConfig& cfg, Rng& rng);

} // namespace tridec
