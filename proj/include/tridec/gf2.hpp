#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace tridec {

// Element of F_{2^a} viewed as an a-bit vector. Only the additive (XOR)
// structure is ever used; the field width a is carried by context.
using FieldElem = std::uint32_t;

inline FieldElem xor_add(FieldElem u, FieldElem v) { return u ^ v; }

// Rank of the F_2-span of the given bit vectors (Gaussian elimination).
int gf2_rank(const std::vector<FieldElem>& elems);

bool is_independent(const std::vector<FieldElem>& elems);

// All 2^rank elements of the F_2-span, ascending numeric order. Includes 0.
std::vector<FieldElem> span(const std::vector<FieldElem>& elems);

// One row of an affine system over unknowns y_1..y_g in F_{2^a}:
// XOR of the unknowns selected by `coeffs` equals `rhs`.
// (A row "c + sum_{i in S} y_i = v" is stored with rhs = c ^ v.)
struct AffineRow {
    std::uint32_t coeffs = 0; // bit i set iff y_i appears
    FieldElem rhs = 0;
};

struct AffineSystem {
    int num_unknowns = 0;
    std::vector<AffineRow> rows;
};

// Solution set of an affine system. Because every row acts coordinatewise on
// the a bits, the count is 0 (inconsistent) or 2^(a*nullity).
struct AffineSolution {
    bool consistent = false;
    int num_unknowns = 0;
    int nullity = 0; // num_unknowns - rank
    // One solution; y_i = particular[i].
    std::vector<FieldElem> particular;
    // Homogeneous directions: assigning any field element mu to free
    // variable j XORs mu into every unknown selected by homogeneous[j].
    std::vector<std::uint32_t> homogeneous;

    // Solution count for field width a, saturating at UINT64_MAX.
    std::uint64_t count(int a) const;
};

AffineSolution solve_affine_system(const AffineSystem& sys);

// Visits every solution exactly once (Gray-code order over the homogeneous
// coefficients, so consecutive solutions differ in one basis step).
// Stops early if the visitor returns false. Requires a*nullity < 64.
void for_each_solution(const AffineSolution& sol, int a,
                       const std::function<bool(const std::vector<FieldElem>&)>& visit);

} // namespace tridec
