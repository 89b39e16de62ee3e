#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "gridtrees/constants.hpp"
#include "gridtrees/exact.hpp"
#include "gridtrees/lattice.hpp"
#include "gridtrees/randwalk.hpp"
#include "gridtrees/real.hpp"
#include "gridtrees/treecount.hpp"

namespace gridtrees {

/// Assignment of every vertex of `base` to one of `districts` district ids
/// (1-based), aligned with base.vertices(). Valid partitions have every
/// district nonempty and connected.
struct DistrictPartition {
    GridGraph base;
    std::vector<int> assignment;
    int districts = 0;
};

inline std::vector<std::vector<std::size_t>> district_index_sets(const DistrictPartition& p) {
    std::vector<std::vector<std::size_t>> sets(static_cast<std::size_t>(p.districts));
    for (std::size_t i = 0; i < p.assignment.size(); ++i) {
        const int d = p.assignment[i];
        if (d < 1 || d > p.districts) throw std::invalid_argument("district id out of range");
        sets[static_cast<std::size_t>(d - 1)].push_back(i);
    }
    return sets;
}

inline void validate_partition(const DistrictPartition& p) {
    if (p.districts < 1) throw std::invalid_argument("district count must be positive");
    if (p.assignment.size() != p.base.vertex_count())
        throw std::invalid_argument("assignment does not cover the vertex set");
    const auto sets = district_index_sets(p);
    for (std::size_t d = 0; d < sets.size(); ++d) {
        if (sets[d].empty())
            throw std::invalid_argument("district " + std::to_string(d + 1) + " is empty");
        if (p.base.subgraph(sets[d]).components().size() != 1)
            throw std::invalid_argument("district " + std::to_string(d + 1) + " disconnected");
    }
}

/// Everything the scatter plot and the verdicts need, with exact per-district
/// tree counts kept alongside the log-space score.
struct PartitionScore {
    std::size_t cut_edges = 0;
    std::vector<std::size_t> district_sizes;  // vertex counts
    std::vector<std::size_t> district_areas;
    std::vector<BigInt> district_taus;
    std::vector<bool> district_simple;
    double spanning_score = 0.0;  // ln of the product of district tree counts
    std::size_t c1 = 0;           // Area(base) + K - 1
    bool all_simple = false;
};

inline PartitionScore score_partition(const DistrictPartition& p) {
    validate_partition(p);
    PartitionScore s;
    for (std::size_t i = 0; i < p.base.vertex_count(); ++i)
        for (std::size_t j : p.base.neighbors(i))
            if (i < j && p.assignment[i] != p.assignment[j]) ++s.cut_edges;

    s.all_simple = true;
    for (const auto& idxs : district_index_sets(p)) {
        const GridGraph d = p.base.subgraph(idxs);
        s.district_sizes.push_back(d.vertex_count());
        s.district_areas.push_back(area(d));
        const TreeCount tc = tau(d);
        s.district_taus.push_back(tc.value);
        s.spanning_score += tc.log_value;
        const bool simple = check_simple(d).is_simple;
        s.district_simple.push_back(simple);
        s.all_simple = s.all_simple && simple;
    }
    s.c1 = area(p.base) + static_cast<std::size_t>(p.districts) - 1;
    return s;
}

enum class VerdictStatus { holds, fails, not_applicable };

inline const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::holds: return "holds";
        case VerdictStatus::fails: return "fails";
        default: return "not-applicable";
    }
}

struct IdentityVerdict {
    VerdictStatus status = VerdictStatus::not_applicable;
    std::string detail;
    long long cut_edges = 0;
    long long predicted = 0;  // C1 - sum of district areas
};

/// Cut edges must equal Area(G) + K - 1 - sum Area(G_i) when the base and
/// all districts are simple.
inline IdentityVerdict verify_redistrict_identity(const DistrictPartition& p,
                                                  const PartitionScore* precomputed = nullptr) {
    const PartitionScore s = precomputed ? *precomputed : score_partition(p);
    IdentityVerdict v;
    if (!check_simple(p.base).is_simple) {
        v.detail = "base graph is not simple";
        return v;
    }
    for (std::size_t d = 0; d < s.district_simple.size(); ++d)
        if (!s.district_simple[d]) {
            v.detail = "district " + std::to_string(d + 1) + " is not simple";
            return v;
        }
    v.cut_edges = static_cast<long long>(s.cut_edges);
    v.predicted = static_cast<long long>(s.c1) -
                  static_cast<long long>(std::accumulate(s.district_areas.begin(),
                                                         s.district_areas.end(), std::size_t{0}));
    v.status = v.cut_edges == v.predicted ? VerdictStatus::holds : VerdictStatus::fails;
    return v;
}

struct SandwichVerdict {
    VerdictStatus status = VerdictStatus::not_applicable;
    std::string detail;
    bool lower_ok = false;  // C1 - score/ln(b) <= cut edges
    bool upper_ok = false;  // cut edges <= C1 - score/ln(4)
    double lower_line = 0.0;
    double upper_line = 0.0;
};

/// The two-sided bound relating cut edges to the spanning tree score,
/// checked as integer/bracket comparisons of b^(C1-|C|) <= prod tau_i <= 4^(C1-|C|).
inline SandwichVerdict verify_boundss(const DistrictPartition& p,
                                      const PartitionScore* precomputed = nullptr) {
    const PartitionScore s = precomputed ? *precomputed : score_partition(p);
    SandwichVerdict v;
    if (!check_simple(p.base).is_simple) {
        v.detail = "base graph is not simple";
        return v;
    }
    for (std::size_t d = 0; d < s.district_simple.size(); ++d)
        if (!s.district_simple[d]) {
            v.detail = "district " + std::to_string(d + 1) + " is not simple";
            return v;
        }
    const BulkConstants& c = bulk_constants();
    Rational product(1);
    for (const BigInt& t : s.district_taus) product *= Rational(t);
    const long exp = static_cast<long>(s.c1) - static_cast<long>(s.cut_edges);
    v.lower_ok = exp <= 0 || rational_pow(c.b_hi, exp) <= product;
    v.upper_ok = product <= rational_pow(Rational(4), exp);
    v.lower_line = static_cast<double>(s.c1) - s.spanning_score / c.ln_b;
    v.upper_line = static_cast<double>(s.c1) - s.spanning_score / c.ln4;
    v.status = (v.lower_ok && v.upper_ok) ? VerdictStatus::holds : VerdictStatus::fails;
    return v;
}

/// Seed partition: equal blocks when the graph is a full rectangle that
/// tiles evenly, otherwise contiguous page-order runs of near-equal size.
inline DistrictPartition initial_partition(const GridGraph& g, int districts) {
    if (districts < 1) throw std::invalid_argument("district count must be positive");
    if (static_cast<std::size_t>(districts) > g.vertex_count())
        throw std::invalid_argument("more districts than vertices");

    DistrictPartition p{g, std::vector<int>(g.vertex_count(), 0), districts};

    std::int64_t lox = g.vertex(0).x, hix = lox, loy = g.vertex(0).y, hiy = loy;
    for (const Vertex& v : g.vertices()) {
        lox = std::min(lox, v.x);
        hix = std::max(hix, v.x);
        loy = std::min(loy, v.y);
        hiy = std::max(hiy, v.y);
    }
    const std::int64_t w = hix - lox + 1;
    const std::int64_t h = hiy - loy + 1;
    const bool full_rect =
        g.is_induced() && g.vertex_count() == static_cast<std::size_t>(w * h);

    if (full_rect) {
        // prefer the most square-ish block arrangement that tiles evenly
        const std::int64_t root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(districts)));
        for (std::int64_t d = root; d >= 1; --d) {
            if (districts % d != 0) continue;
            for (const auto& [rows, cols] :
                 {std::pair<std::int64_t, std::int64_t>{d, districts / d}, {districts / d, d}}) {
                if (h % rows != 0 || w % cols != 0) continue;
                const std::int64_t bh = h / rows, bw = w / cols;
                for (std::size_t i = 0; i < g.vertex_count(); ++i) {
                    const Vertex v = g.vertex(i);
                    const std::int64_t br = (v.y - loy) / bh;
                    const std::int64_t bc = (v.x - lox) / bw;
                    p.assignment[i] = static_cast<int>(br * cols + bc) + 1;
                }
                validate_partition(p);
                return p;
            }
        }
    }

    // page-order runs
    const std::size_t n = g.vertex_count();
    const std::size_t quota = n / static_cast<std::size_t>(districts);
    const std::size_t extra = n % static_cast<std::size_t>(districts);
    std::size_t i = 0;
    for (int d = 1; d <= districts; ++d) {
        std::size_t take = quota + (static_cast<std::size_t>(d) <= extra ? 1 : 0);
        while (take-- > 0) p.assignment[i++] = d;
    }
    validate_partition(p);
    return p;
}

/// One recombination move: merge a uniformly chosen adjacent district pair,
/// draw a uniform spanning tree of the merged subgraph, and cut a tree edge
/// whose two sides both stay within the population tolerance of the ideal
/// district size. Rejects the pair after 64 fruitless tree draws.
namespace detail {

inline bool recombine_once(DistrictPartition& p, Rng& rng, double pop_tolerance) {
    std::set<std::pair<int, int>> adjacent;
    for (std::size_t i = 0; i < p.base.vertex_count(); ++i)
        for (std::size_t j : p.base.neighbors(i))
            if (i < j && p.assignment[i] != p.assignment[j])
                adjacent.insert({std::min(p.assignment[i], p.assignment[j]),
                                 std::max(p.assignment[i], p.assignment[j])});
    if (adjacent.empty()) return false;
    std::vector<std::pair<int, int>> pairs(adjacent.begin(), adjacent.end());
    const auto [d1, d2] = pairs[rng.index(pairs.size())];

    std::vector<std::size_t> merged;
    for (std::size_t i = 0; i < p.assignment.size(); ++i)
        if (p.assignment[i] == d1 || p.assignment[i] == d2) merged.push_back(i);
    const GridGraph sub = p.base.subgraph(merged);
    const std::size_t n = sub.vertex_count();

    const double ideal =
        static_cast<double>(p.base.vertex_count()) / static_cast<double>(p.districts);
    const double lo = ideal * (1.0 - pop_tolerance);
    const double hi = ideal * (1.0 + pop_tolerance);

    for (int draw = 0; draw < 64; ++draw) {
        const std::vector<Edge> tree = sample_spanning_tree(sub, rng);
        std::vector<std::vector<std::size_t>> tadj(n);
        for (const Edge& e : tree) {
            const std::size_t a = *sub.index_of(e.a), b = *sub.index_of(e.b);
            tadj[a].push_back(b);
            tadj[b].push_back(a);
        }
        // root at 0; subtree sizes give both sides of every tree edge
        std::vector<std::size_t> parent(n, n), order;
        order.reserve(n);
        order.push_back(0);
        parent[0] = 0;
        for (std::size_t q = 0; q < order.size(); ++q)
            for (std::size_t nb : tadj[order[q]])
                if (parent[nb] == n) {
                    parent[nb] = order[q];
                    order.push_back(nb);
                }
        std::vector<std::size_t> size(n, 1);
        for (std::size_t q = order.size(); q-- > 1;) size[parent[order[q]]] += size[order[q]];

        std::vector<std::size_t> cuts;
        for (std::size_t u = 1; u < n; ++u) {
            const double s = static_cast<double>(size[u]);
            const double rest = static_cast<double>(n - size[u]);
            if (s >= lo && s <= hi && rest >= lo && rest <= hi) cuts.push_back(u);
        }
        if (cuts.empty()) continue;

        const std::size_t cut = cuts[rng.index(cuts.size())];
        std::vector<char> in_subtree(n, 0);
        std::deque<std::size_t> queue{cut};
        in_subtree[cut] = 1;
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t nb : tadj[u])
                if (nb != parent[u] && !in_subtree[nb] && parent[nb] == u) {
                    in_subtree[nb] = 1;
                    queue.push_back(nb);
                }
        }
        // the side holding the page-first merged vertex keeps the smaller id
        const int root_id = std::min(d1, d2), other_id = std::max(d1, d2);
        for (std::size_t local = 0; local < n; ++local)
            p.assignment[merged[local]] = in_subtree[local] ? other_id : root_id;
        return true;
    }
    return false;
}

} // namespace detail

/// Seeded recombination chain from the seed partition; returns steps + 1
/// scores with the initial partition first. Deterministic in (seed, params).
inline std::vector<PartitionScore> run_ensemble(const GridGraph& g, int districts,
                                                std::size_t steps, std::uint64_t seed,
                                                double pop_tolerance = 0.05) {
    DistrictPartition p = initial_partition(g, districts);
    Rng rng(seed);
    std::vector<PartitionScore> scores;
    scores.reserve(steps + 1);
    scores.push_back(score_partition(p));
    for (std::size_t s = 0; s < steps; ++s) {
        int attempts = 0;
        while (!detail::recombine_once(p, rng, pop_tolerance)) {
            if (++attempts >= 1024) throw std::runtime_error("recombination step failed");
        }
        scores.push_back(score_partition(p));
    }
    return scores;
}

/// CSV with the bounding-line parameters as header comments.
inline void write_scatter_csv(const std::vector<PartitionScore>& scores, std::ostream& os) {
    const BulkConstants& c = bulk_constants();
    os.precision(12);
    if (!scores.empty()) os << "# intercept_c1 = " << scores.front().c1 << "\n";
    os << "# slope_lower = " << -1.0 / c.ln_b << "\n";
    os << "# slope_upper = " << -1.0 / c.ln4 << "\n";
    os << "step,cut_edges,spanning_score,all_simple\n";
    for (std::size_t i = 0; i < scores.size(); ++i)
        os << i << "," << scores[i].cut_edges << "," << scores[i].spanning_score << ","
           << (scores[i].all_simple ? 1 : 0) << "\n";
}

} // namespace gridtrees
