#pragma once

#include <iostream>
#include <ostream>
#include <utility>
#include <vector>

#include "gridtrees/exact.hpp"
#include "gridtrees/lattice.hpp"
#include "gridtrees/real.hpp"

namespace gridtrees {

/// Exact spanning-tree count with its natural log.
struct TreeCount {
    BigInt value;
    double log_value = 0.0;
};

namespace detail {

// determinant of the Laplacian of one component with one vertex removed
inline BigInt component_tree_count(const GridGraph& g, const std::vector<std::size_t>& comp) {
    const std::size_t n = comp.size();
    if (n <= 1) return BigInt(1);
    std::unordered_map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < n; ++k) pos[comp[k]] = k;
    IntMatrix lap(n - 1);  // drop the last vertex of the component
    for (std::size_t k = 0; k + 1 < n; ++k) {
        lap.at(k, k) = static_cast<long>(g.degree(comp[k]));
        for (std::size_t nb : g.neighbors(comp[k])) {
            const std::size_t kk = pos.at(nb);
            if (kk + 1 < n && kk != k) lap.at(k, kk) = -1;
        }
    }
    return determinant(std::move(lap));
}

} // namespace detail

/// Number of ways to choose one spanning tree in every connected component
/// (so a single vertex counts 1 and the empty graph counts 1).
inline TreeCount tau(const GridGraph& g) {
    BigInt product(1);
    for (const auto& comp : g.components()) product *= detail::component_tree_count(g, comp);
    TreeCount out;
    out.log_value = log_of_integer(product);
    out.value = std::move(product);
    return out;
}

/// Prefix graphs (H'_v, H_v) of g at v: induced within g's own edge set by
/// the vertices strictly before v, respectively up to and including v, in
/// page order. H'_v of the first vertex is the empty graph.
inline std::pair<GridGraph, GridGraph> prefix_graphs(const GridGraph& g, const Vertex& v) {
    auto idx = g.index_of(v);
    if (!idx) throw std::invalid_argument("vertex not in graph");
    return {g.prefix(*idx), g.prefix(*idx + 1)};
}

/// Multiplicative growth factor m_v = tau(H_v) / tau(H'_v), exactly.
inline Rational multiplier(const GridGraph& g, const Vertex& v) {
    auto [before, upto] = prefix_graphs(g, v);
    Rational m(tau(upto).value, tau(before).value);
    m.canonicalize();
    return m;
}

/// Per-vertex multipliers in page order. The product telescopes to tau(g).
struct MultiplierProfile {
    std::vector<Vertex> order;
    std::vector<Rational> multipliers;
    double log_tau = 0.0;
};

inline MultiplierProfile multiplier_profile(const GridGraph& g) {
    MultiplierProfile profile;
    profile.order = g.vertices();
    profile.multipliers.reserve(g.vertex_count());
    BigInt prev(1);
    for (std::size_t k = 1; k <= g.vertex_count(); ++k) {
        BigInt cur = tau(g.prefix(k)).value;
        Rational m(cur, prev);
        m.canonicalize();
        profile.multipliers.push_back(std::move(m));
        prev = std::move(cur);
    }
    profile.log_tau = g.vertex_count() == 0 ? 0.0 : log_of_integer(prev);

    Rational product(1);
    for (const Rational& m : profile.multipliers) product *= m;
    if (product != Rational(prev)) throw std::logic_error("multiplier product does not telescope");
    if (!profile.multipliers.empty() && profile.multipliers.front() != 1)
        throw std::logic_error("first multiplier must be 1");
    for (std::size_t k = 0; k < profile.multipliers.size(); ++k)
        if (profile.multipliers[k] < 1)
            std::cerr << "warning: multiplier below 1 at (" << profile.order[k].x << ","
                      << profile.order[k].y << "): " << to_fraction_string(profile.multipliers[k])
                      << "\n";
    return profile;
}

/// CSV rows (x, y, multiplier) with 12 significant digits.
inline void write_heatmap_csv(const MultiplierProfile& profile, std::ostream& os) {
    os << "x,y,multiplier\n";
    for (std::size_t k = 0; k < profile.order.size(); ++k)
        os << profile.order[k].x << "," << profile.order[k].y << ","
           << rational_to_decimal(profile.multipliers[k], 12) << "\n";
}

} // namespace gridtrees
