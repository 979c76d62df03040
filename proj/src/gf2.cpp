#include "tridec/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace tridec {

int gf2_rank(const std::vector<FieldElem>& elems) {
    std::vector<FieldElem> basis; // reduced: distinct leading bits
    for (FieldElem e : elems) {
        for (FieldElem b : basis) e = std::min(e, e ^ b);
        if (e != 0) basis.push_back(e);
    }
    return static_cast<int>(basis.size());
}

bool is_independent(const std::vector<FieldElem>& elems) {
    return gf2_rank(elems) == static_cast<int>(elems.size());
}

std::vector<FieldElem> span(const std::vector<FieldElem>& elems) {
    // Reduce to a basis first so the enumeration is 2^rank, then expand.
    std::vector<FieldElem> basis;
    for (FieldElem e : elems) {
        for (FieldElem b : basis) e = std::min(e, e ^ b);
        if (e != 0) basis.push_back(e);
    }
    std::vector<FieldElem> out;
    out.reserve(std::size_t(1) << basis.size());
    out.push_back(0);
    for (FieldElem b : basis) {
        const std::size_t sz = out.size();
        for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] ^ b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t AffineSolution::count(int a) const {
    if (!consistent) return 0;
    const int bits = a * nullity;
    if (bits >= 64) return UINT64_MAX;
    return std::uint64_t(1) << bits;
}

AffineSolution solve_affine_system(const AffineSystem& sys) {
    const int g = sys.num_unknowns;
    // Gaussian elimination on [coeffs | rhs]; coefficient arithmetic is over
    // F_2, right-hand sides are XORed as whole field elements.
    std::vector<AffineRow> rows = sys.rows;
    std::vector<int> pivot_row_of(g, -1);
    int rank = 0;
    std::size_t next = 0;
    for (int col = 0; col < g && next < rows.size(); ++col) {
        std::size_t sel = rows.size();
        for (std::size_t r = next; r < rows.size(); ++r) {
            if (rows[r].coeffs >> col & 1u) { sel = r; break; }
        }
        if (sel == rows.size()) continue;
        std::swap(rows[next], rows[sel]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != next && (rows[r].coeffs >> col & 1u)) {
                rows[r].coeffs ^= rows[next].coeffs;
                rows[r].rhs ^= rows[next].rhs;
            }
        }
        pivot_row_of[col] = static_cast<int>(next);
        ++next;
        ++rank;
    }

    AffineSolution sol;
    sol.num_unknowns = g;
    for (std::size_t r = next; r < rows.size(); ++r) {
        if (rows[r].rhs != 0) return sol; // 0 = nonzero: inconsistent
    }
    sol.consistent = true;
    sol.nullity = g - rank;
    sol.particular.assign(g, 0);
    for (int col = 0; col < g; ++col) {
        if (pivot_row_of[col] >= 0) {
            // Free variables are 0 in the particular solution, so the pivot
            // value is just the reduced right-hand side.
            sol.particular[col] = rows[pivot_row_of[col]].rhs;
        }
    }
    for (int col = 0; col < g; ++col) {
        if (pivot_row_of[col] >= 0) continue;
        // Direction for free variable `col`: itself plus every pivot whose
        // reduced row mentions it.
        std::uint32_t dir = 1u << col;
        for (int p = 0; p < g; ++p) {
            if (pivot_row_of[p] >= 0 && (rows[pivot_row_of[p]].coeffs >> col & 1u)) {
                dir |= 1u << p;
            }
        }
        sol.homogeneous.push_back(dir);
    }
    return sol;
}

void for_each_solution(const AffineSolution& sol, int a,
                       const std::function<bool(const std::vector<FieldElem>&)>& visit) {
    if (!sol.consistent) return;
    const int bits = a * sol.nullity;
    assert(bits < 64);
    std::vector<FieldElem> y = sol.particular;
    if (!visit(y)) return;
    // Gray-code walk: step k toggles bit ctz(k), i.e. bit b of the field
    // coefficient of free variable j where ctz(k) = j*a + b.
    const std::uint64_t total = std::uint64_t(1) << bits;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int t = std::countr_zero(k);
        const int j = t / a, b = t % a;
        const std::uint32_t dir = sol.homogeneous[j];
        for (int i = 0; i < sol.num_unknowns; ++i) {
            if (dir >> i & 1u) y[i] ^= FieldElem(1) << b;
        }
        if (!visit(y)) return;
    }
}

} // namespace tridec
