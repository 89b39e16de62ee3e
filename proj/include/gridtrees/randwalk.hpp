#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gridtrees/exact.hpp"
#include "gridtrees/lattice.hpp"
#include "gridtrees/rng.hpp"
#include "gridtrees/treecount.hpp"

namespace gridtrees {

namespace detail {

// Exact absorption probabilities toward `target` for the simple random walk
// on g with the given absorbing vertices. Returns the probability for every
// transient vertex reachable from `start` without stepping on an absorbing
// vertex, keyed by vertex index. Throws when the walk cannot terminate.
inline std::unordered_map<std::size_t, Rational> absorption_solve(const GridGraph& g,
                                                                  std::size_t start,
                                                                  const std::vector<char>& absorbing,
                                                                  std::size_t target) {
    std::vector<std::size_t> transient;
    std::vector<char> seen(g.vertex_count(), 0);
    bool touches_absorbing = false;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        transient.push_back(u);
        for (std::size_t n : g.neighbors(u)) {
            if (absorbing[n]) {
                touches_absorbing = true;
                continue;
            }
            if (!seen[n]) {
                seen[n] = 1;
                queue.push_back(n);
            }
        }
    }
    if (!touches_absorbing) throw std::invalid_argument("walk cannot terminate");

    std::sort(transient.begin(), transient.end());  // page order keeps the band narrow
    std::unordered_map<std::size_t, std::size_t> row_of;
    for (std::size_t r = 0; r < transient.size(); ++r) row_of[transient[r]] = r;

    IntMatrix sys(transient.size());
    std::vector<BigInt> rhs(transient.size());
    for (std::size_t r = 0; r < transient.size(); ++r) {
        const std::size_t u = transient[r];
        sys.at(r, r) = static_cast<long>(g.degree(u));
        for (std::size_t n : g.neighbors(u)) {
            if (n == target) rhs[r] += 1;
            if (!absorbing[n]) sys.at(r, row_of.at(n)) -= 1;
        }
    }
    std::vector<Rational> x = solve_linear_system(std::move(sys), std::move(rhs));
    std::unordered_map<std::size_t, Rational> out;
    for (std::size_t r = 0; r < transient.size(); ++r) out.emplace(transient[r], std::move(x[r]));
    return out;
}

} // namespace detail

/// Probability that the walk from `start` is absorbed at `target` rather
/// than at any other vertex of `absorb_at`. Exact.
inline Rational absorption_probability(const GridGraph& g, const Vertex& start,
                                       const std::vector<Vertex>& absorb_at, const Vertex& target) {
    auto si = g.index_of(start);
    if (!si) throw std::invalid_argument("start vertex not in graph");
    auto ti = g.index_of(target);
    if (!ti) throw std::invalid_argument("target vertex not in graph");
    std::vector<char> absorbing(g.vertex_count(), 0);
    bool target_absorbs = false;
    for (const Vertex& v : absorb_at) {
        auto i = g.index_of(v);
        if (!i) throw std::invalid_argument("absorbing vertex not in graph");
        absorbing[*i] = 1;
        if (*i == *ti) target_absorbs = true;
    }
    if (!target_absorbs) throw std::invalid_argument("target must be absorbing");
    if (absorbing[*si]) throw std::invalid_argument("start vertex is absorbing");
    auto h = detail::absorption_solve(g, *si, absorbing, *ti);
    return h.at(*si);
}

/// Probability that the walk from v reaches b before returning to v. Exact.
inline Rational escape_probability(const GridGraph& g, const Vertex& v, const Vertex& b) {
    auto vi = g.index_of(v);
    auto bi = g.index_of(b);
    if (!vi || !bi) throw std::invalid_argument("vertex not in graph");
    if (*vi == *bi) throw std::invalid_argument("escape target equals start");
    std::vector<char> absorbing(g.vertex_count(), 0);
    absorbing[*vi] = 1;
    absorbing[*bi] = 1;
    if (g.degree(*vi) == 0) throw std::invalid_argument("vertices lie in different components");

    // h(u) = P(reach b before v from u); E = average of h over v's neighbors
    std::unordered_map<std::size_t, Rational> h;
    Rational acc(0);
    for (std::size_t n : g.neighbors(*vi)) {
        if (n == *bi) {
            acc += 1;
            continue;
        }
        if (n == *vi) continue;
        if (h.empty() || !h.count(n)) {
            auto part = detail::absorption_solve(g, n, absorbing, *bi);
            h.insert(part.begin(), part.end());
        }
        acc += h.at(n);
    }
    // reachability of b: some neighbor chain must assign positive mass or b adjacent
    {
        std::vector<char> seen(g.vertex_count(), 0);
        std::deque<std::size_t> queue{*vi};
        seen[*vi] = 1;
        bool found = false;
        while (!queue.empty() && !found) {
            std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t n : g.neighbors(u)) {
                if (n == *bi) { found = true; break; }
                if (!seen[n]) { seen[n] = 1; queue.push_back(n); }
            }
        }
        if (!found) throw std::invalid_argument("vertices lie in different components");
    }
    acc /= Rational(static_cast<long>(g.degree(*vi)));
    acc.canonicalize();
    return acc;
}

/// Escape data at a vertex, all exact:
///   escape          walk from v reaches the left neighbor before returning
///   absorb_at_start walk from the upper neighbor hits v before the left one
///   both_edges      a uniform spanning tree of H_v's component keeps both
///                   the upper and the left edge at v
///   multiplier      2/(1 - both_edges), equal to the growth factor m_v
struct EscapeTriple {
    Rational escape;
    Rational absorb_at_start;
    Rational both_edges;
    Rational multiplier;
};

/// Computes the triple on the component of v inside the prefix graph H_v.
/// Requires the up-left unit cell at v to be fully inside H_v.
inline EscapeTriple escape_triple(const GridGraph& g, const Vertex& v) {
    auto vi = g.index_of(v);
    if (!vi) throw std::invalid_argument("vertex not in graph");
    GridGraph h = g.prefix(*vi + 1);
    if (!is_face(h, Cell{v})) throw std::invalid_argument("v is in the top-left boundary");
    const Vertex above{v.x, v.y + 1};
    const Vertex left{v.x - 1, v.y};

    EscapeTriple t;
    t.escape = escape_probability(h, v, left);
    t.absorb_at_start = absorption_probability(h, above, {v, left}, v);
    t.both_edges = t.absorb_at_start / (Rational(2) - t.absorb_at_start);
    t.both_edges.canonicalize();
    t.multiplier = Rational(2) / (Rational(1) - t.both_edges);
    t.multiplier.canonicalize();

    // the two independent solves must satisfy E = 1 - Q/2 exactly
    Rational e_check = Rational(1) - t.absorb_at_start / Rational(2);
    e_check.canonicalize();
    if (t.escape != e_check) throw std::logic_error("escape/absorption solves disagree");
    Rational via_q = (Rational(2) - t.absorb_at_start) / (Rational(1) - t.absorb_at_start);
    via_q.canonicalize();
    Rational via_e = (Rational(2) * t.escape) / (Rational(2) * t.escape - Rational(1));
    via_e.canonicalize();
    if (t.multiplier != via_q || t.multiplier != via_e)
        throw std::logic_error("multiplier identities violated");
    return t;
}

/// Truncation of the half-plane-plus-half-row graph around the origin:
/// vertices of {y >= 1} u {y = 0, x <= 0} within edge distance k of the
/// origin, with degree-1 vertices removed in a single pass.
struct TruncatedU {
    int k = 0;
    GridGraph graph;
};

inline TruncatedU build_truncated_u(int k) {
    if (k < 1) throw std::invalid_argument("truncation depth must be at least 1");
    auto member = [](const Vertex& p) { return p.y >= 1 || (p.y == 0 && p.x <= 0); };

    std::vector<Vertex> ball{{0, 0}};
    std::unordered_map<std::uint64_t, int> dist{{detail::pack_point(0, 0), 0}};
    std::deque<Vertex> queue{{0, 0}};
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        const int du = dist.at(detail::pack_point(u));
        if (du == k) continue;
        for (const Vertex& n : lattice_neighbors(u)) {
            if (!member(n)) continue;
            if (dist.emplace(detail::pack_point(n), du + 1).second) {
                ball.push_back(n);
                queue.push_back(n);
            }
        }
    }
    GridGraph full = induced_grid_graph(ball);
    std::vector<Vertex> kept;
    for (std::size_t i = 0; i < full.vertex_count(); ++i)
        if (full.degree(i) != 1) kept.push_back(full.vertex(i));
    return TruncatedU{k, induced_grid_graph(std::move(kept))};
}

/// Q(k): absorption at the origin (rather than its left neighbor) for the
/// walk started at (0,1) on the truncated graph. Defined for k >= 2.
inline Rational truncated_u_absorption(int k) {
    if (k < 2) throw std::invalid_argument("absorption on the truncated graph needs k >= 2");
    const TruncatedU u = build_truncated_u(k);
    return absorption_probability(u.graph, {0, 1}, {{0, 0}, {-1, 0}}, {0, 0});
}

/// E(k): escape from the origin to its left neighbor on the truncated graph.
inline Rational truncated_u_escape(int k) {
    if (k < 2) throw std::invalid_argument("escape on the truncated graph needs k >= 2");
    const TruncatedU u = build_truncated_u(k);
    return escape_probability(u.graph, {0, 0}, {-1, 0});
}

/// F(k) = (2 - Q(k)) / (1 - Q(k)): the exact upper bound for multipliers of
/// vertices at depth k. Non-increasing in k with limit exp(4C/pi).
/// Memoized; safe for concurrent callers.
inline Rational multiplier_bound(int k) {
    static std::mutex mu;
    static std::map<int, Rational> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = memo.find(k); it != memo.end()) return it->second;
    }
    const Rational q = truncated_u_absorption(k);
    Rational f = (Rational(2) - q) / (Rational(1) - q);
    f.canonicalize();
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(k, f);
    return f;
}

/// Largest k such that the depth-k truncated graph, translated to v, is a
/// subgraph of the prefix graph H_v. Equals 1 exactly on the top-left
/// boundary.
inline int depth(const GridGraph& g, const Vertex& v) {
    auto vi = g.index_of(v);
    if (!vi) throw std::invalid_argument("vertex not in graph");
    GridGraph h = g.prefix(*vi + 1);
    if (!is_face(h, Cell{v})) return 1;  // the k=2 truncation is the unit cell
    int k = 2;
    for (;;) {
        const TruncatedU next = build_truncated_u(k + 1);
        bool fits = true;
        for (const Vertex& u : next.graph.vertices())
            if (!h.has_vertex({u.x + v.x, u.y + v.y})) {
                fits = false;
                break;
            }
        if (fits)
            for (const Edge& e : next.graph.edges())
                if (!h.has_edge({e.a.x + v.x, e.a.y + v.y}, {e.b.x + v.x, e.b.y + v.y})) {
                    fits = false;
                    break;
                }
        if (!fits) return k;
        ++k;
    }
}

enum class TreeSampler { wilson, aldous_broder };

/// Uniformly random spanning tree of a connected grid graph, deterministic
/// for a fixed RNG state. Wilson's loop-erased walk is the default; the
/// Aldous-Broder first-entry walk is kept as an independent cross-check.
inline std::vector<Edge> sample_spanning_tree(const GridGraph& g, Rng& rng,
                                              TreeSampler sampler = TreeSampler::wilson) {
    if (!g.connected()) throw std::invalid_argument("graph is disconnected");
    const std::size_t n = g.vertex_count();
    std::vector<std::pair<std::size_t, std::size_t>> tree;
    tree.reserve(n - 1);

    if (sampler == TreeSampler::wilson) {
        std::vector<char> in_tree(n, 0);
        std::vector<std::size_t> next(n, 0);
        in_tree[0] = 1;
        for (std::size_t s = 0; s < n; ++s) {
            if (in_tree[s]) continue;
            std::size_t u = s;
            while (!in_tree[u]) {
                const auto& nb = g.neighbors(u);
                next[u] = nb[rng.index(nb.size())];
                u = next[u];
            }
            u = s;
            while (!in_tree[u]) {
                in_tree[u] = 1;
                tree.emplace_back(u, next[u]);
                u = next[u];
            }
        }
    } else {
        std::vector<char> visited(n, 0);
        std::size_t u = 0;
        std::size_t seen = 1;
        visited[0] = 1;
        while (seen < n) {
            const auto& nb = g.neighbors(u);
            std::size_t w = nb[rng.index(nb.size())];
            if (!visited[w]) {
                visited[w] = 1;
                ++seen;
                tree.emplace_back(w, u);
            }
            u = w;
        }
    }

    std::vector<Edge> out;
    out.reserve(tree.size());
    for (auto [i, j] : tree) out.push_back(make_edge(g.vertex(i), g.vertex(j)));
    std::sort(out.begin(), out.end(), [](const Edge& l, const Edge& r) {
        if (!(l.a == r.a)) return page_less(l.a, r.a);
        return page_less(l.b, r.b);
    });
    return out;
}

inline std::vector<Edge> sample_uniform_spanning_tree(const GridGraph& g, std::uint64_t seed,
                                                      TreeSampler sampler = TreeSampler::wilson) {
    Rng rng(seed);
    return sample_spanning_tree(g, rng, sampler);
}

/// Monte-Carlo estimate of the both-edges probability at v, with the exact
/// value and a 4-sigma binomial consistency verdict alongside.
struct BothEdgesEstimate {
    double estimate = 0.0;
    Rational exact;
    double standard_error = 0.0;
    bool consistent = false;
    std::size_t samples = 0;
};

inline BothEdgesEstimate estimate_both_edges(const GridGraph& g, const Vertex& v,
                                             std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("no samples");
    const EscapeTriple exact = escape_triple(g, v);

    auto vi = g.index_of(v);
    GridGraph h = g.prefix(*vi + 1);
    std::size_t hv = *h.index_of(v);
    for (const auto& comp : h.components())
        if (std::find(comp.begin(), comp.end(), hv) != comp.end()) {
            h = h.subgraph(comp);
            break;
        }
    const Edge up = make_edge(v, {v.x, v.y + 1});
    const Edge left = make_edge(v, {v.x - 1, v.y});

    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::vector<Edge> tree = sample_spanning_tree(h, rng);
        bool has_up = false, has_left = false;
        for (const Edge& e : tree) {
            has_up = has_up || e == up;
            has_left = has_left || e == left;
        }
        if (has_up && has_left) ++hits;
    }

    BothEdgesEstimate out;
    out.samples = samples;
    out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    out.exact = exact.both_edges;
    const double p = out.exact.get_d();
    out.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    out.consistent = std::abs(out.estimate - p) <= 4.0 * out.standard_error;
    return out;
}

} // namespace gridtrees
