#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tridec/rng.hpp"

namespace tridec {

// Canonical unordered pair of vertices, smaller first, packed for map keys.
struct Edge {
    std::uint16_t u = 0, v = 0; // u < v

    static Edge make(int a, int b);
    std::uint32_t key() const { return (std::uint32_t(u) << 16) | v; }
    static Edge from_key(std::uint32_t k) { return Edge{std::uint16_t(k >> 16), std::uint16_t(k & 0xffff)}; }
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge& a, const Edge& b) { return a.key() <=> b.key(); }
};

// Sorted vertex triple.
struct Triple {
    std::uint16_t a = 0, b = 0, c = 0; // a < b < c

    static Triple make(int x, int y, int z);
    std::uint64_t key() const {
        return (std::uint64_t(a) << 32) | (std::uint64_t(b) << 16) | c;
    }
    static Triple from_key(std::uint64_t k) {
        return Triple{std::uint16_t(k >> 32), std::uint16_t(k >> 16), std::uint16_t(k)};
    }
    bool contains_edge(Edge e) const;
    std::array<Edge, 3> edges() const;
    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple& x, const Triple& y) { return x.key() <=> y.key(); }
};

// Simple undirected graph with bitset adjacency rows: O(n/64) row
// intersection for codegree and triangle queries.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n);
    static Graph complete(int n);

    int n() const { return n_; }
    std::int64_t edge_count() const { return m_; }

    bool has(int u, int v) const {
        return row_[std::size_t(u) * words_ + std::size_t(v >> 6)] >> (v & 63) & 1u;
    }
    void add(int u, int v);
    void remove(int u, int v);
    bool has(Edge e) const { return has(e.u, e.v); }
    void add(Edge e) { add(e.u, e.v); }
    void remove(Edge e) { remove(e.u, e.v); }

    int degree(int v) const { return deg_[v]; }
    int max_degree() const;

    // |G(u) ∩ G(v)|.
    int codegree(int u, int v) const;
    // Common-neighborhood popcount over any set of rows (up to 4 vertices).
    std::int64_t common_neighbors(const std::vector<int>& vs) const;
    std::vector<int> common_neighbor_list(int u, int v) const;
    std::vector<int> neighbors(int v) const;

    std::vector<Edge> edges() const; // ascending canonical order
    // Visits edges in ascending canonical order.
    template <class F> void for_each_edge(F&& f) const {
        for (int u = 0; u < n_; ++u)
            for (int v : neighbors_above(u)) f(Edge{std::uint16_t(u), std::uint16_t(v)});
    }
    std::vector<int> neighbors_above(int u) const; // neighbors > u

    bool is_subgraph_of(const Graph& other) const;

    friend bool operator==(const Graph&, const Graph&) = default;

    const std::uint64_t* row(int v) const { return row_.data() + std::size_t(v) * words_; }
    std::size_t words() const { return words_; }

  private:
    int n_ = 0;
    std::size_t words_ = 0;
    std::int64_t m_ = 0;
    std::vector<std::uint64_t> row_;
    std::vector<int> deg_;
};

// Exact triangle count; parallel (OpenMP over rows) and serial reference.
std::int64_t count_triangles(const Graph& g);
std::int64_t count_triangles_serial(const Graph& g);

// Integer-weighted edge vector (sparse). Zero weights are never stored.
struct IntGraph {
    int n = 0;
    std::map<std::uint32_t, std::int64_t> w;

    IntGraph() = default;
    explicit IntGraph(int n_) : n(n_) {}
    static IntGraph from_graph(const Graph& g); // indicator vector

    std::int64_t get(Edge e) const {
        auto it = w.find(e.key());
        return it == w.end() ? 0 : it->second;
    }
    void addw(Edge e, std::int64_t delta);

    IntGraph positive_part() const;
    IntGraph negative_part() const; // nonnegative weights of -min(w,0)
    std::int64_t total() const;     // sum of weights (∂_0 after ∂_1 halving aside)
    std::int64_t abs_degree(int v) const;
    bool is_zero() const { return w.empty(); }

    friend IntGraph operator+(const IntGraph& x, const IntGraph& y);
    friend IntGraph operator-(const IntGraph& x, const IntGraph& y);
    friend bool operator==(const IntGraph&, const IntGraph&) = default;
};

// Integer-weighted triangle vector (sparse).
struct TriangleVec {
    int n = 0;
    std::map<std::uint64_t, std::int64_t> w;

    TriangleVec() = default;
    explicit TriangleVec(int n_) : n(n_) {}

    std::int64_t get(Triple t) const {
        auto it = w.find(t.key());
        return it == w.end() ? 0 : it->second;
    }
    void addw(Triple t, std::int64_t delta);

    TriangleVec positive_part() const;
    TriangleVec negative_part() const;

    friend TriangleVec operator+(const TriangleVec& x, const TriangleVec& y);
    friend TriangleVec operator-(const TriangleVec& x, const TriangleVec& y);
    friend bool operator==(const TriangleVec&, const TriangleVec&) = default;
};

// Set of pairwise edge-disjoint triangles (checked by validate()).
struct Matching {
    std::vector<Triple> tris;

    bool contains(Triple t) const;
    bool validate_edge_disjoint() const;
    Graph edge_union(int n) const;          // ∪M as a Graph
    IntGraph edge_indicator(int n) const;   // ∪M as a 0/1 IntGraph (errors if overlap)
    TriangleVec indicator(int n) const;
    void sort_canonical();
};

// Boundary / shadow operators (Z-linear).
IntGraph boundary2(const TriangleVec& v);               // triangles → edges
std::vector<std::int64_t> boundary1(const TriangleVec& v, int n); // triangles → vertices
std::vector<std::int64_t> boundary1(const IntGraph& v);           // edges → vertices
std::int64_t boundary0(const IntGraph& v);              // edges → point (sum)
std::int64_t boundary0(const TriangleVec& v);

struct Rational {
    std::int64_t num = 0, den = 1;
    double value() const { return den == 0 ? 0.0 : double(num) / double(den); }
};

Rational density(const Graph& g); // |G| / C(n,2); n >= 2 required

bool is_tridivisible(const Graph& g);
// |J| ≡ 0 mod 3 (sum of weights) and every vertex weight sum even.
bool is_tridivisible(const IntGraph& j);

// c-boundedness: every vertex meets < c*n edges, multiplicity counted.
bool is_bounded(const IntGraph& j, double c);
bool is_bounded(const Graph& g, double c);
// max_v Σ_u |J_uv| / n: the smallest c (exclusive) witnessing boundedness.
double boundedness_value(const IntGraph& j);
double boundedness_value(const Graph& g);

// Typicality checking. Two statistics are reported:
//  * worst_dev: max over examined sets S of |obs/pred - 1| / |S| — the
//    smallest c consistent with every examined set (a lower bound on the
//    true c under sampling);
//  * ensemble_dev: max over set-shape classes (|S|, |S*|) of the relative
//    deviation of the class's aggregate observed count from its aggregate
//    prediction, again divided by |S|. Single-set counts at desk scale are
//    Poisson-noisy even for perfectly typical graphs, so concentration
//    claims over seeds are checked on the ensemble statistic.
struct TypicalityReport {
    double worst_dev = 0.0;
    double ensemble_dev = 0.0;
    bool sampled = false;      // exhaustive iff false
    bool degenerate = false;   // a prediction was 0 (e.g. d(G*) = 0)
    std::int64_t sets_examined = 0;
};

TypicalityReport typicality_deviation(const Graph& g, int h, Rng& rng,
                                      std::int64_t samples = 10000);
TypicalityReport pair_typicality_deviation(const Graph& g, const Graph& gstar,
                                           int h, Rng& rng,
                                           std::int64_t samples = 10000);

bool verify_decomposition(const Graph& g, const Matching& m);

// Text format: first line "n m", then m lines "u v" (0-based, u < v);
// blank lines and lines starting with '#' ignored.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);
void save_graph(const Graph& g, std::ostream& out);

// G(n, p) with the given rng (test/experiment helper).
Graph random_graph(int n, double p, Rng& rng);

} // namespace tridec
