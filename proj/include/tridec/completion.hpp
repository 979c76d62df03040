#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridec/gf2.hpp"
#include "tridec/graph.hpp"
#include "tridec/templ.hpp"

namespace tridec {

// Thrown when a randomized stage exhausts its retry/sample budget.
struct StageAbort : std::runtime_error {
    std::string stage;
    StageAbort(std::string stage_, const std::string& what)
        : std::runtime_error(stage_ + ": " + what), stage(std::move(stage_)) {}
};

// A copy of K_{2,2,2} with parts {part[j][0], part[j][1]}. Carries the sign
// map s(f_x) = (-1)^{sum x} on its eight triangles f_x, where f_x picks
// part[j][x_j]; the signed sum of the triangles has zero edge boundary, and
// each edge lies in exactly one triangle of each sign.
struct Octahedron {
    std::array<std::array<int, 2>, 3> part;

    Triple triangle(int x) const {
        return Triple::make(part[0][x & 1], part[1][(x >> 1) & 1], part[2][(x >> 2) & 1]);
    }
    static int sign(int x) {
        return (__builtin_popcount(static_cast<unsigned>(x) & 7u) & 1) ? -1 : 1;
    }
    std::array<Edge, 12> all_edges() const;
    // The 9 edges not in triangle(base); base in [0,8).
    std::vector<Edge> edges_outside(int base) const;
    bool edges_in(const Graph& g) const;
    // Signed triangle vector (boundary-free by construction).
    TriangleVec signed_vec(int n) const;
    bool distinct_vertices() const;
};

// The octahedron associated with a labeled triple z: parts
// {z_i, vertex with label l_j ^ l_k}. Exists iff the label sum is nonzero,
// all partner labels name vertices, and the 12 edges are present in g.
std::optional<Octahedron> is_octahedral(Triple z, const Graph& g, const Template& tpl);

// Tripartite shuffle graph: parts are the cosets t_i ^ span(x1,x2,x3)
// (t3 = t1 ^ t2), 24 points, 192 edges, containing the associated
// octahedron of the target triangle z with z_i = t_i ^ x_i.
struct Shuffle {
    Triple z;
    std::array<FieldElem, 3> x{};
    std::array<FieldElem, 3> t{};
    std::vector<FieldElem> coset; // span(x1,x2,x3), 8 elements
    std::array<std::array<int, 8>, 3> parts{}; // vertices; parts[i][k] has label t_i^coset[k]
    std::uint64_t accepted_after = 0; // candidates examined before success

    std::vector<Edge> all_edges() const;                     // 192
    Octahedron target_octahedron(const Template& tpl) const; // K'(z)
    // The 180 shuffle edges outside the target octahedron.
    std::vector<Edge> new_edges(const Template& tpl) const;
    Graph graph(int n) const;
};

// Validity test for a t-candidate: independence of {x1,x2,x3,t1,t2}, all 24
// coset labels naming distinct vertices, all 192 edges in Gstar, and (when
// given) the 180 new edges avoiding `used` and `delta`.
bool check_shuffle_candidate(const std::array<FieldElem, 3>& zl,
                             std::array<FieldElem, 2> t, const Template& tpl,
                             const Graph* used, const Graph* delta);

std::optional<Shuffle> make_shuffle(Triple z, std::array<FieldElem, 2> t,
                                    const Template& tpl, const Graph* used,
                                    const Graph* delta);

// Uniform rejection sampling of t-pairs; throws StageAbort on exhaustion.
// Precondition: z octahedral for the template (checked).
Shuffle find_shuffle(Triple z, const Template& tpl, const Graph& used,
                     const Graph& delta, std::uint64_t budget, Rng& rng);

// The two triangle decompositions of the shuffle graph: m3 collects the 64
// label-sum-zero triangles (template triangles when the shuffle is inside
// Gstar), m4 the 64 with label sum x1^x2^x3 (containing the target z).
struct ShufflePair {
    Matching m3, m4;
};
ShufflePair shuffle_decompositions(const Shuffle& s, const Template& tpl);

struct CompletionConfig {
    std::uint64_t budget = 20000; // candidate samples per greedy step
    int max_retries = 20;         // whole-stage restarts
    double c4 = 0.0, c5 = 0.0;    // boundedness report targets (0 = unset)
};

struct ShuffleRunResult {
    Matching M3, M4;
    std::vector<Shuffle> shuffles;
};

// One shuffle per target in m2, new edges pairwise distinct and avoiding
// delta; returns M3 (template side) and M4 (containing every m2 triangle).
ShuffleRunResult run_shuffle_algorithm(const Matching& m2, const Template& tpl,
                                       const Graph& delta,
                                       const CompletionConfig& cfg, Rng& rng);

// c-boundedness plus the line condition: at most c*2^a edges whose two
// endpoint labels have any fixed XOR difference.
struct LinearBound {
    double bounded_value = 0.0;    // max_v deg(v) / n
    std::int64_t max_line = 0;     // max edges on one label-difference line
};
LinearBound linear_bound_values(const Graph& j, const std::vector<FieldElem>& labels);
bool linear_boundedness(const Graph& j, const std::vector<FieldElem>& labels,
                        double c, int a);

// Output of the completion-side elimination.
struct Psi {
    Matching M1, M2;
    Graph Delta;      // union of associated octahedra of M2 triangles
    Graph Gamma;      // Phase I new edges
    Graph GammaPrime; // Phase II new edges
    bool p1_ok = false;          // M2 octahedral, octahedra pairwise edge-disjoint
    LinearBound p2;              // linear boundedness of Delta
    std::int64_t p3_max_plane = 0; // max M2 triangles on one basic plane
};

// Two-phase octahedral elimination on Phi = Mc + Mi - Mo (boundary L):
// Phase I replaces every signed triangle by a valid extended configuration
// (far triangles octahedral, no template triangles, edge-disjoint
// octahedra); Phase II eliminates paired opposite-sign non-far triangles
// that carry no leave edge. Returns M1 = Psi^+, M2 = Psi^- with (L, UM2)
// partitioning UM1.
Psi eliminate_for_completion(const Matching& mc, const Matching& mi,
                             const Matching& mo, const Graph& leave,
                             const Graph& g, const Template& tpl,
                             const CompletionConfig& cfg, Rng& rng);

} // namespace tridec
