#pragma once

#include <optional>
#include <set>
#include <string>

#include "tridec/gf2.hpp"
#include "tridec/graph.hpp"

namespace tridec {

enum class TemplateMode { paper, dense, fixed_a };

// Random algebraic template: an injection pi of the vertices into the
// nonzero elements of F_{2^a}, the set T of triangles of G whose labels XOR
// to zero, and Gstar, the union of their edges. Each edge of G lies in at
// most one triangle of T (its third point is label-determined), so T is
// automatically a set of edge-disjoint triangles.
struct Template {
    int a = 0;
    double gamma = 0.0; // n * 2^{-a}
    std::vector<FieldElem> pi;  // vertex -> nonzero label, injective
    std::vector<int> pi_inv;    // label -> vertex, -1 if unused; size 2^a
    Matching T;
    Graph Gstar;
    std::set<std::uint64_t> t_keys; // triple keys of T

    FieldElem label(int v) const { return pi[v]; }
    int vertex_of_label(FieldElem x) const {
        return (x < pi_inv.size()) ? pi_inv[x] : -1;
    }
    bool is_template(const Triple& t) const { return t_keys.count(t.key()) > 0; }
};

// Builds the template. paper: smallest a with n <= 2^{a-1} (requires n >= 8);
// dense: n = 2^a - 1 and pi is a uniformly random bijection onto the nonzero
// elements; fixed_a: any a with 2^a > n.
Template build_template(const Graph& g, TemplateMode mode, Rng& rng, int fixed_a = 0);

struct TemplateStats {
    double d_gstar = 0.0;
    double predicted = 0.0; // gamma * d(G)^3
    double rel_error = 0.0; // |d_gstar/predicted - 1|
    bool paper_window = false; // 1/4 < gamma < 1/2
    std::int64_t t_size = 0;
    TypicalityReport pair_typicality;
};

TemplateStats template_stats(const Graph& g, const Template& tpl, int h, Rng& rng);

// Counting report shared by shuffle and linear-extension counting. When the
// candidate space exceeds `budget` a uniform sample is taken and `estimate`
// extrapolates; otherwise the count is exact.
struct CountReport {
    bool exact = false;
    std::uint64_t space = 0;    // candidate space size (saturated)
    std::uint64_t examined = 0;
    std::uint64_t valid = 0;
    double estimate = 0.0;      // valid / examined * space
    double predicted = 0.0;     // first-order prediction for comparison
    bool prediction_negligible = false; // prediction ~ 0 at this scale
};

// Counts t-pairs giving a shuffle for target z: with x_i = label(z_i) ^ t_i,
// requires {x1,x2,x3,t1,t2} independent, all 24 part points labels of
// vertices, and the full tripartite shuffle graph inside Gstar.
// Precondition: z is octahedral (labels XOR to a nonzero value and the
// associated K_{2,2,2} exists in G); throws otherwise.
CountReport count_shuffles(const Graph& g, const Template& tpl, Triple z,
                           std::uint64_t budget, Rng& rng);

// Linear extension: a small graph H with per-vertex affine forms
// L_v(y) = c_v ^ XOR of the unknowns selected by mask_v over g unknowns.
// Base vertices are those with empty masks.
struct LinearExtension {
    Graph H;
    std::vector<FieldElem> consts;      // c_v per vertex of H
    std::vector<std::uint32_t> masks;   // S_v per vertex of H
    int num_unknowns = 0;
};

// Counts assignments y in F_{2^a}^g for which v -> vertex_of_label(L_v(y))
// embeds H into Gstar (all labels distinct, all in pi(V), edges in Gstar).
// Preconditions: forms pairwise distinct; the mask incidence matrix has full
// column rank g >= 1. Throws on violation.
CountReport count_linear_extensions(const Graph& g, const Template& tpl,
                                    const LinearExtension& ext,
                                    std::uint64_t budget, Rng& rng);

std::string template_to_json(const Template& tpl);
Template template_from_json(const std::string& text, const Graph& g);

} // namespace tridec
