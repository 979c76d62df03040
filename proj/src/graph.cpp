#include "tridec/graph.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tridec {

Edge Edge::make(int a, int b) {
    assert(a != b && a >= 0 && b >= 0);
    if (a > b) std::swap(a, b);
    return Edge{std::uint16_t(a), std::uint16_t(b)};
}

Triple Triple::make(int x, int y, int z) {
    assert(x != y && y != z && x != z);
    if (x > y) std::swap(x, y);
    if (y > z) std::swap(y, z);
    if (x > y) std::swap(x, y);
    return Triple{std::uint16_t(x), std::uint16_t(y), std::uint16_t(z)};
}

bool Triple::contains_edge(Edge e) const {
    const bool hu = e.u == a || e.u == b || e.u == c;
    const bool hv = e.v == a || e.v == b || e.v == c;
    return hu && hv;
}

std::array<Edge, 3> Triple::edges() const {
    return {Edge{a, b}, Edge{a, c}, Edge{b, c}};
}

Graph::Graph(int n) : n_(n), words_((std::size_t(n) + 63) / 64) {
    row_.assign(std::size_t(n) * words_, 0);
    deg_.assign(n, 0);
}

Graph Graph::complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add(u, v);
    return g;
}

void Graph::add(int u, int v) {
    assert(u != v);
    if (has(u, v)) return;
    row_[std::size_t(u) * words_ + std::size_t(v >> 6)] |= std::uint64_t(1) << (v & 63);
    row_[std::size_t(v) * words_ + std::size_t(u >> 6)] |= std::uint64_t(1) << (u & 63);
    ++deg_[u];
    ++deg_[v];
    ++m_;
}

void Graph::remove(int u, int v) {
    if (!has(u, v)) return;
    row_[std::size_t(u) * words_ + std::size_t(v >> 6)] &= ~(std::uint64_t(1) << (v & 63));
    row_[std::size_t(v) * words_ + std::size_t(u >> 6)] &= ~(std::uint64_t(1) << (u & 63));
    --deg_[u];
    --deg_[v];
    --m_;
}

int Graph::max_degree() const {
    int d = 0;
    for (int x : deg_) d = std::max(d, x);
    return d;
}

int Graph::codegree(int u, int v) const {
    const std::uint64_t* ru = row(u);
    const std::uint64_t* rv = row(v);
    std::int64_t c = 0;
    for (std::size_t i = 0; i < words_; ++i) c += std::popcount(ru[i] & rv[i]);
    return static_cast<int>(c);
}

std::int64_t Graph::common_neighbors(const std::vector<int>& vs) const {
    if (vs.empty()) return n_;
    std::int64_t c = 0;
    for (std::size_t i = 0; i < words_; ++i) {
        std::uint64_t acc = row(vs[0])[i];
        for (std::size_t k = 1; k < vs.size(); ++k) acc &= row(vs[k])[i];
        c += std::popcount(acc);
    }
    return c;
}

std::vector<int> Graph::common_neighbor_list(int u, int v) const {
    std::vector<int> out;
    const std::uint64_t* ru = row(u);
    const std::uint64_t* rv = row(v);
    for (std::size_t i = 0; i < words_; ++i) {
        std::uint64_t x = ru[i] & rv[i];
        while (x) {
            out.push_back(int(i * 64 + std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    out.reserve(deg_[v]);
    const std::uint64_t* r = row(v);
    for (std::size_t i = 0; i < words_; ++i) {
        std::uint64_t x = r[i];
        while (x) {
            out.push_back(int(i * 64 + std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

std::vector<int> Graph::neighbors_above(int u) const {
    std::vector<int> out;
    for (int v : neighbors(u))
        if (v > u) out.push_back(v);
    return out;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(std::size_t(m_));
    for_each_edge([&](Edge e) { out.push_back(e); });
    return out;
}

bool Graph::is_subgraph_of(const Graph& other) const {
    if (other.n() < n_) return false;
    bool ok = true;
    for_each_edge([&](Edge e) { ok = ok && other.has(e); });
    return ok;
}

std::int64_t count_triangles_serial(const Graph& g) {
    std::int64_t total = 0;
    for (int u = 0; u < g.n(); ++u) {
        for (int v : g.neighbors_above(u)) {
            // Count w > v adjacent to both u and v.
            const std::uint64_t* ru = g.row(u);
            const std::uint64_t* rv = g.row(v);
            for (std::size_t i = std::size_t(v / 64); i < g.words(); ++i) {
                std::uint64_t x = ru[i] & rv[i];
                if (i == std::size_t(v / 64)) x &= ~((std::uint64_t(2) << (v & 63)) - 1);
                total += std::popcount(x);
            }
        }
    }
    return total;
}

std::int64_t count_triangles(const Graph& g) {
    std::int64_t total = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : total)
    for (int u = 0; u < g.n(); ++u) {
        for (int v : g.neighbors_above(u)) {
            const std::uint64_t* ru = g.row(u);
            const std::uint64_t* rv = g.row(v);
            for (std::size_t i = std::size_t(v / 64); i < g.words(); ++i) {
                std::uint64_t x = ru[i] & rv[i];
                if (i == std::size_t(v / 64)) x &= ~((std::uint64_t(2) << (v & 63)) - 1);
                total += std::popcount(x);
            }
        }
    }
    return total;
}

IntGraph IntGraph::from_graph(const Graph& g) {
    IntGraph j(g.n());
    g.for_each_edge([&](Edge e) { j.w.emplace(e.key(), 1); });
    return j;
}

void IntGraph::addw(Edge e, std::int64_t delta) {
    if (delta == 0) return;
    auto [it, inserted] = w.try_emplace(e.key(), delta);
    if (!inserted) {
        it->second += delta;
        if (it->second == 0) w.erase(it);
    }
}

IntGraph IntGraph::positive_part() const {
    IntGraph out(n);
    for (auto& [k, x] : w)
        if (x > 0) out.w.emplace(k, x);
    return out;
}

IntGraph IntGraph::negative_part() const {
    IntGraph out(n);
    for (auto& [k, x] : w)
        if (x < 0) out.w.emplace(k, -x);
    return out;
}

std::int64_t IntGraph::total() const {
    std::int64_t s = 0;
    for (auto& [k, x] : w) s += x;
    return s;
}

std::int64_t IntGraph::abs_degree(int v) const {
    std::int64_t s = 0;
    for (auto& [k, x] : w) {
        Edge e = Edge::from_key(k);
        if (e.u == v || e.v == v) s += std::abs(x);
    }
    return s;
}

IntGraph operator+(const IntGraph& x, const IntGraph& y) {
    IntGraph out = x;
    out.n = std::max(x.n, y.n);
    for (auto& [k, val] : y.w) out.addw(Edge::from_key(k), val);
    return out;
}

IntGraph operator-(const IntGraph& x, const IntGraph& y) {
    IntGraph out = x;
    out.n = std::max(x.n, y.n);
    for (auto& [k, val] : y.w) out.addw(Edge::from_key(k), -val);
    return out;
}

void TriangleVec::addw(Triple t, std::int64_t delta) {
    if (delta == 0) return;
    auto [it, inserted] = w.try_emplace(t.key(), delta);
    if (!inserted) {
        it->second += delta;
        if (it->second == 0) w.erase(it);
    }
}

TriangleVec TriangleVec::positive_part() const {
    TriangleVec out(n);
    for (auto& [k, x] : w)
        if (x > 0) out.w.emplace(k, x);
    return out;
}

TriangleVec TriangleVec::negative_part() const {
    TriangleVec out(n);
    for (auto& [k, x] : w)
        if (x < 0) out.w.emplace(k, -x);
    return out;
}

TriangleVec operator+(const TriangleVec& x, const TriangleVec& y) {
    TriangleVec out = x;
    out.n = std::max(x.n, y.n);
    for (auto& [k, val] : y.w) out.addw(Triple::from_key(k), val);
    return out;
}

TriangleVec operator-(const TriangleVec& x, const TriangleVec& y) {
    TriangleVec out = x;
    out.n = std::max(x.n, y.n);
    for (auto& [k, val] : y.w) out.addw(Triple::from_key(k), -val);
    return out;
}

bool Matching::contains(Triple t) const {
    return std::find(tris.begin(), tris.end(), t) != tris.end();
}

bool Matching::validate_edge_disjoint() const {
    std::vector<std::uint32_t> keys;
    keys.reserve(tris.size() * 3);
    for (const Triple& t : tris)
        for (const Edge& e : t.edges()) keys.push_back(e.key());
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

Graph Matching::edge_union(int n) const {
    Graph g(n);
    for (const Triple& t : tris)
        for (const Edge& e : t.edges()) g.add(e);
    return g;
}

IntGraph Matching::edge_indicator(int n) const {
    IntGraph j(n);
    for (const Triple& t : tris)
        for (const Edge& e : t.edges()) j.addw(e, 1);
    return j;
}

TriangleVec Matching::indicator(int n) const {
    TriangleVec v(n);
    for (const Triple& t : tris) v.addw(t, 1);
    return v;
}

void Matching::sort_canonical() {
    std::sort(tris.begin(), tris.end());
}

IntGraph boundary2(const TriangleVec& v) {
    IntGraph out(v.n);
    for (auto& [k, x] : v.w) {
        Triple t = Triple::from_key(k);
        for (const Edge& e : t.edges()) out.addw(e, x);
    }
    return out;
}

std::vector<std::int64_t> boundary1(const TriangleVec& v, int n) {
    std::vector<std::int64_t> out(n, 0);
    for (auto& [k, x] : v.w) {
        Triple t = Triple::from_key(k);
        out[t.a] += x;
        out[t.b] += x;
        out[t.c] += x;
    }
    return out;
}

std::vector<std::int64_t> boundary1(const IntGraph& v) {
    std::vector<std::int64_t> out(v.n, 0);
    for (auto& [k, x] : v.w) {
        Edge e = Edge::from_key(k);
        out[e.u] += x;
        out[e.v] += x;
    }
    return out;
}

std::int64_t boundary0(const IntGraph& v) { return v.total(); }

std::int64_t boundary0(const TriangleVec& v) {
    std::int64_t s = 0;
    for (auto& [k, x] : v.w) s += x;
    return s;
}

Rational density(const Graph& g) {
    if (g.n() < 2) throw std::invalid_argument("density: need n >= 2");
    return Rational{g.edge_count(), std::int64_t(g.n()) * (g.n() - 1) / 2};
}

bool is_tridivisible(const Graph& g) {
    if (g.edge_count() % 3 != 0) return false;
    for (int v = 0; v < g.n(); ++v)
        if (g.degree(v) % 2 != 0) return false;
    return true;
}

bool is_tridivisible(const IntGraph& j) {
    if (j.total() % 3 != 0) return false;
    for (std::int64_t d : boundary1(j))
        if (d % 2 != 0) return false;
    return true;
}

bool is_bounded(const IntGraph& j, double c) {
    std::vector<std::int64_t> deg(j.n, 0);
    for (auto& [k, x] : j.w) {
        Edge e = Edge::from_key(k);
        deg[e.u] += std::abs(x);
        deg[e.v] += std::abs(x);
    }
    for (int v = 0; v < j.n; ++v)
        if (double(deg[v]) >= c * j.n) return false;
    return true;
}

bool is_bounded(const Graph& g, double c) {
    for (int v = 0; v < g.n(); ++v)
        if (double(g.degree(v)) >= c * g.n()) return false;
    return true;
}

double boundedness_value(const IntGraph& j) {
    std::vector<std::int64_t> deg(j.n, 0);
    for (auto& [k, x] : j.w) {
        Edge e = Edge::from_key(k);
        deg[e.u] += std::abs(x);
        deg[e.v] += std::abs(x);
    }
    std::int64_t mx = 0;
    for (std::int64_t d : deg) mx = std::max(mx, d);
    return j.n == 0 ? 0.0 : double(mx) / j.n;
}

double boundedness_value(const Graph& g) {
    return g.n() == 0 ? 0.0 : double(g.max_degree()) / g.n();
}

namespace {

// Shared engine for the plain and pair typicality checks. gstar == nullptr
// means the plain check (all of S drawn from G).
TypicalityReport typicality_impl(const Graph& g, const Graph* gstar, int h,
                                 Rng& rng, std::int64_t samples) {
    TypicalityReport rep;
    const int n = g.n();
    const double d = density(g).value();
    const double dstar = gstar ? density(*gstar).value() : 0.0;

    // Aggregates per shape class (|S|, |S*|).
    struct Agg {
        double obs = 0.0, pred = 0.0;
    };
    std::map<std::pair<int, int>, Agg> classes;

    auto examine = [&](const std::vector<int>& s_star, const std::vector<int>& s_plain) {
        const int size = int(s_star.size() + s_plain.size());
        double pred = double(n);
        for (std::size_t i = 0; i < s_star.size(); ++i) pred *= dstar;
        for (std::size_t i = 0; i < s_plain.size(); ++i) pred *= d;
        // Intersect G*(x) rows for starred vertices with G(x) rows.
        std::int64_t obs = 0;
        const std::size_t words = g.words();
        for (std::size_t i = 0; i < words; ++i) {
            std::uint64_t acc = ~std::uint64_t(0);
            for (int v : s_star) acc &= gstar->row(v)[i];
            for (int v : s_plain) acc &= g.row(v)[i];
            if (i + 1 == words && n % 64 != 0) acc &= (std::uint64_t(1) << (n % 64)) - 1;
            obs += std::popcount(acc);
        }
        if (pred <= 0.0) {
            rep.degenerate = true;
            return;
        }
        rep.worst_dev = std::max(rep.worst_dev, std::abs(double(obs) / pred - 1.0) / size);
        Agg& a = classes[{size, int(s_star.size())}];
        a.obs += double(obs);
        a.pred += pred;
        ++rep.sets_examined;
    };

    const bool exhaustive = h <= 2 && !gstar;
    rep.sampled = !exhaustive;
    if (exhaustive) {
        std::vector<int> empty;
        for (int u = 0; u < n; ++u) examine(empty, {u});
        if (h >= 2)
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) examine(empty, {u, v});
    } else {
        // Spread the sample budget over all shape classes.
        std::vector<std::pair<int, int>> shapes;
        for (int size = 1; size <= h; ++size)
            for (int star = 0; star <= (gstar ? size : 0); ++star) shapes.push_back({size, star});
        const std::int64_t per = std::max<std::int64_t>(1, samples / std::int64_t(shapes.size()));
        for (auto [size, star] : shapes) {
            for (std::int64_t it = 0; it < per; ++it) {
                // Random distinct vertex set of the given size.
                std::vector<int> vs;
                while (int(vs.size()) < size) {
                    int v = int(rng.below(std::uint64_t(n)));
                    if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
                }
                std::vector<int> s_star(vs.begin(), vs.begin() + star);
                std::vector<int> s_plain(vs.begin() + star, vs.end());
                examine(s_star, s_plain);
            }
        }
    }
    for (auto& [shape, a] : classes) {
        if (a.pred <= 0.0) continue;
        const double dev = std::abs(a.obs / a.pred - 1.0) / shape.first;
        rep.ensemble_dev = std::max(rep.ensemble_dev, dev);
    }
    return rep;
}

} // namespace

TypicalityReport typicality_deviation(const Graph& g, int h, Rng& rng,
                                      std::int64_t samples) {
    return typicality_impl(g, nullptr, h, rng, samples);
}

TypicalityReport pair_typicality_deviation(const Graph& g, const Graph& gstar,
                                           int h, Rng& rng, std::int64_t samples) {
    if (!gstar.is_subgraph_of(g)) throw std::invalid_argument("pair_typicality: Gstar not contained in G");
    return typicality_impl(g, &gstar, h, rng, samples);
}

bool verify_decomposition(const Graph& g, const Matching& m) {
    if (!m.validate_edge_disjoint()) return false;
    std::int64_t covered = 0;
    for (const Triple& t : m.tris) {
        for (const Edge& e : t.edges()) {
            if (!g.has(e)) return false;
            ++covered;
        }
    }
    return covered == g.edge_count();
}

Graph load_graph(std::istream& in) {
    std::string line;
    long n = -1, m = -1;
    Graph g;
    long seen = 0;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n >> m) || n < 0 || m < 0) throw std::runtime_error("graph header: expected 'n m'");
            g = Graph(int(n));
            continue;
        }
        long u, v;
        if (!(ls >> u >> v)) throw std::runtime_error("graph edge line: expected 'u v'");
        if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw std::runtime_error("graph edge out of range");
        g.add(int(u), int(v));
        ++seen;
    }
    if (n < 0) throw std::runtime_error("graph file: missing header");
    if (seen != m || g.edge_count() != m) throw std::runtime_error("graph file: edge count mismatch");
    return g;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_graph(in);
}

void save_graph(const Graph& g, std::ostream& out) {
    out << g.n() << ' ' << g.edge_count() << '\n';
    g.for_each_edge([&](Edge e) { out << e.u << ' ' << e.v << '\n'; });
}

Graph random_graph(int n, double p, Rng& rng) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < p) g.add(u, v);
    return g;
}

} // namespace tridec
