#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <thread>

#include "gridtrees/constants.hpp"
#include "gridtrees/randwalk.hpp"
#include "support/testutil.hpp"

using namespace gridtrees;

TEST_CASE("absorption probabilities on tiny chains") {
    const GridGraph path = testutil::rectangle(3, 1);  // a - v - b as (0,0),(1,0),(2,0)
    REQUIRE(absorption_probability(path, {0, 0}, {{1, 0}, {2, 0}}, {1, 0}) == Rational(1));

    const GridGraph cycle = testutil::square(2);
    // from (0,1), absorbed at (0,0) rather than (1,0): two-state hand solve
    REQUIRE(absorption_probability(cycle, {0, 1}, {{0, 0}, {1, 0}}, {0, 0}) == Rational(2, 3));

    REQUIRE_THROWS_WITH(absorption_probability(path, {1, 0}, {{1, 0}}, {1, 0}),
                        "start vertex is absorbing");
    REQUIRE_THROWS_WITH(absorption_probability(path, {0, 0}, {{2, 0}}, {1, 0}),
                        "target must be absorbing");
    const GridGraph split = induced_grid_graph({{0, 0}, {1, 0}, {5, 5}});
    REQUIRE_THROWS_WITH(absorption_probability(split, {0, 0}, {{5, 5}}, {5, 5}),
                        "walk cannot terminate");
}

TEST_CASE("escape probabilities") {
    const GridGraph edge = induced_grid_graph({{0, 0}, {1, 0}});
    REQUIRE(escape_probability(edge, {1, 0}, {0, 0}) == Rational(1));

    const GridGraph cycle = testutil::square(2);
    REQUIRE(escape_probability(cycle, {1, 0}, {0, 0}) == Rational(2, 3));

    const GridGraph split = induced_grid_graph({{0, 0}, {1, 0}, {5, 5}});
    REQUIRE_THROWS_WITH(escape_probability(split, {0, 0}, {5, 5}),
                        "vertices lie in different components");
}

TEST_CASE("escape triple on the unit square") {
    const EscapeTriple t = escape_triple(testutil::square(2), {1, 0});
    REQUIRE(t.escape == Rational(2, 3));
    REQUIRE(t.absorb_at_start == Rational(2, 3));
    REQUIRE(t.both_edges == Rational(1, 2));
    REQUIRE(t.multiplier == Rational(4));

    REQUIRE_THROWS_WITH(escape_triple(testutil::square(2), {0, 1}),
                        "v is in the top-left boundary");
}

TEST_CASE("escape triple equals the determinant-route multiplier") {
    for (const GridGraph& g : {testutil::square(4), testutil::trimmed_diamond(3)}) {
        std::set<std::pair<long, long>> tlb;
        for (const Vertex& v : top_left_boundary(g)) tlb.insert({v.x, v.y});
        for (const Vertex& v : g.vertices()) {
            if (tlb.count({v.x, v.y})) continue;
            const EscapeTriple t = escape_triple(g, v);
            REQUIRE(t.escape > Rational(1, 2));
            REQUIRE(t.multiplier == multiplier(g, v));
            REQUIRE(Rational(2) / (Rational(1) - t.both_edges) == t.multiplier);
        }
    }
}

TEST_CASE("truncated graphs around the origin") {
    REQUIRE_THROWS(build_truncated_u(0));

    const TruncatedU u1 = build_truncated_u(1);
    REQUIRE(u1.graph.vertices() == std::vector<Vertex>{{0, 0}});

    const TruncatedU u2 = build_truncated_u(2);
    REQUIRE(u2.graph.vertices() == std::vector<Vertex>{{-1, 1}, {0, 1}, {-1, 0}, {0, 0}});
    REQUIRE(u2.graph.edge_count() == 4);

    for (int k = 1; k <= 8; ++k) {
        const GridGraph small = build_truncated_u(k).graph;
        const GridGraph big = build_truncated_u(k + 1).graph;
        for (const Vertex& v : small.vertices()) REQUIRE(big.has_vertex(v));
        for (const Edge& e : small.edges()) REQUIRE(big.has_edge(e.a, e.b));
    }
}

TEST_CASE("multiplier bound table") {
    REQUIRE_THROWS(multiplier_bound(1));
    REQUIRE(multiplier_bound(2) == Rational(4));
    REQUIRE(truncated_u_absorption(2) == Rational(2, 3));
    REQUIRE(multiplier_bound(3) == Rational(209, 60));

    const std::map<int, double> table{{3, 3.4833}, {4, 3.3486}, {5, 3.2936}};
    for (const auto& [k, expected] : table) {
        const double rounded =
            std::round(multiplier_bound(k).get_d() * 10000.0) / 10000.0;
        REQUIRE_THAT(rounded, Catch::Matchers::WithinAbs(expected, 1e-9));
    }
}

TEST_CASE("multiplier bound is non-increasing and approaches the bulk base") {
    Rational prev = multiplier_bound(2);
    for (int k = 3; k <= 14; ++k) {
        const Rational cur = multiplier_bound(k);
        REQUIRE(cur <= prev);
        REQUIRE(certified_above_b(cur));
        prev = cur;
    }
    // the gap crosses 0.01 at k = 14 under the definition implemented here
    Rational gap14 = multiplier_bound(14) - bulk_constants().b_hi;
    Rational gap12 = multiplier_bound(12) - bulk_constants().b_lo;
    const Rational hundredth(1, 100);
    REQUIRE(gap14 < hundredth);
    REQUIRE(gap12 > hundredth);
}

TEST_CASE("truncated escape grows toward b/(2(b-1))") {
    const double limit = 0.7262367;  // b/(2(b-1)) at b = 3.2099124
    Rational prev(0);
    for (int k = 2; k <= 10; ++k) {
        const Rational e = truncated_u_escape(k);
        REQUIRE(e > prev);
        REQUIRE(e.get_d() < limit);
        // dual route: E(k) = F(k) / (2 (F(k) - 1))
        const Rational f = multiplier_bound(k);
        Rational via_f = f / (Rational(2) * (f - Rational(1)));
        via_f.canonicalize();
        REQUIRE(e == via_f);
        prev = e;
    }
    REQUIRE_THAT(truncated_u_escape(10).get_d(), Catch::Matchers::WithinAbs(limit, 0.003));
}

TEST_CASE("depth of a vertex") {
    const GridGraph cell = testutil::square(2);
    REQUIRE(depth(cell, {0, 1}) == 1);  // top-left boundary
    REQUIRE(depth(cell, {1, 0}) == 2);

    const GridGraph sq2 = testutil::square(2);
    REQUIRE(depth(sq2, {1, 0}) == 2);

    // for v = (6,0) in the 12x12 square the translate of the depth-k graph
    // fits exactly up to k = 7 (x-extents -(k-1) and k-2 against 6 and 5)
    const GridGraph sq12 = testutil::square(12);
    REQUIRE(depth(sq12, {6, 0}) == 7);
    REQUIRE(depth(sq12, {1, 0}) == 2);
    REQUIRE(depth(sq12, {0, 0}) == 1);

    REQUIRE_THROWS_WITH(depth(cell, {9, 9}), "vertex not in graph");

    // depth 1 exactly on the top-left boundary
    const GridGraph g = testutil::trimmed_diamond(4);
    std::set<std::pair<long, long>> tlb;
    for (const Vertex& v : top_left_boundary(g)) tlb.insert({v.x, v.y});
    for (const Vertex& v : g.vertices())
        REQUIRE((depth(g, v) == 1) == (tlb.count({v.x, v.y}) > 0));
}

TEST_CASE("samplers return the unique tree of a tree") {
    const GridGraph path = testutil::rectangle(4, 1);
    for (const TreeSampler s : {TreeSampler::wilson, TreeSampler::aldous_broder}) {
        const auto tree = sample_uniform_spanning_tree(path, 42, s);
        REQUIRE(tree.size() == 3);
        REQUIRE(GridGraph(path.vertices(), tree) == path);
    }
    REQUIRE_THROWS_WITH(sample_uniform_spanning_tree(induced_grid_graph({{0, 0}, {9, 9}}), 1),
                        "graph is disconnected");
}

TEST_CASE("samplers are deterministic in the seed") {
    const GridGraph g = testutil::square(4);
    REQUIRE(sample_uniform_spanning_tree(g, 7) == sample_uniform_spanning_tree(g, 7));
    REQUIRE(sample_uniform_spanning_tree(g, 7) != sample_uniform_spanning_tree(g, 8));
}

namespace {

bool edge_less(const Edge& l, const Edge& r) {
    if (!(l.a == r.a)) return page_less(l.a, r.a);
    return page_less(l.b, r.b);
}

struct TreeLess {
    bool operator()(const std::vector<Edge>& a, const std::vector<Edge>& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), edge_less);
    }
};

using TreeHistogram = std::map<std::vector<Edge>, std::size_t, TreeLess>;

TreeHistogram tree_histogram(const GridGraph& g, TreeSampler s, std::size_t samples,
                             std::uint64_t seed) {
    TreeHistogram hist;
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) ++hist[sample_spanning_tree(g, rng, s)];
    return hist;
}

} // namespace

TEST_CASE("both samplers are uniform on the 4-cycle") {
    const GridGraph g = testutil::square(2);
    for (const TreeSampler s : {TreeSampler::wilson, TreeSampler::aldous_broder}) {
        const auto hist = tree_histogram(g, s, 20000, 3);
        REQUIRE(hist.size() == 4);
        for (const auto& [tree, count] : hist)
            REQUIRE_THAT(static_cast<double>(count) / 20000.0,
                         Catch::Matchers::WithinAbs(0.25, 0.02));
    }
}

TEST_CASE("wilson and aldous-broder agree in distribution on the 2x3 grid") {
    const GridGraph g = testutil::rectangle(3, 2);
    REQUIRE(tau(g).value == 15);
    const std::size_t n = 100000;
    for (const TreeSampler s : {TreeSampler::wilson, TreeSampler::aldous_broder}) {
        const auto hist = tree_histogram(g, s, n, 17);
        REQUIRE(hist.size() == 15);
        std::vector<std::size_t> counts;
        for (const auto& [tree, count] : hist) counts.push_back(count);
        // chi-square with 14 degrees of freedom; 36.12 is the p = 0.001 cut
        REQUIRE(testutil::chi_square_uniform(counts, n) < 36.1233);
    }
}

TEST_CASE("monte-carlo estimate of the both-edges probability") {
    const GridGraph cell = testutil::square(2);
    const BothEdgesEstimate e = estimate_both_edges(cell, {1, 0}, 20000, 5);
    REQUIRE(e.exact == Rational(1, 2));
    REQUIRE(e.consistent);
    REQUIRE_THAT(e.estimate, Catch::Matchers::WithinAbs(0.5, 4.5 * e.standard_error));
    REQUIRE_THROWS_WITH(estimate_both_edges(cell, {1, 0}, 0, 5), "no samples");
}

TEST_CASE("pure operations are safe from concurrent threads") {
    const GridGraph g = testutil::square(8);
    const Rational f6 = multiplier_bound(6);
    const BigInt t = tau(g).value;
    std::vector<std::thread> workers;
    std::vector<int> ok(4, 0);
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            ok[w] = (multiplier_bound(6) == f6 && tau(g).value == t &&
                     escape_triple(g, {4, 3}).multiplier == multiplier(g, {4, 3}))
                        ? 1
                        : 0;
        });
    for (auto& th : workers) th.join();
    for (int w = 0; w < 4; ++w) REQUIRE(ok[w] == 1);
}

TEST_CASE("escape probabilities respect subgraph monotonicity") {
    // delete vertices away from v (keeping its edges) and from b: the escape
    // probability can only drop
    Rng rng(31);
    int tested = 0;
    for (int trial = 0; trial < 60 && tested < 25; ++trial) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(trial));
        const auto cells = testutil::random_simple_polyomino(sub, 12 + static_cast<int>(sub.below(20)));
        const GridGraph big = testutil::graph_from_cells(cells);
        const std::size_t vi = sub.index(big.vertex_count());
        std::size_t bi = sub.index(big.vertex_count());
        if (bi == vi) continue;
        const Vertex v = big.vertex(vi), b = big.vertex(bi);

        std::set<std::size_t> protected_idx{vi, bi};
        for (std::size_t n : big.neighbors(vi)) protected_idx.insert(n);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < big.vertex_count(); ++i)
            if (protected_idx.count(i) || sub.below(4) != 0) keep.push_back(i);
        GridGraph small = big.subgraph(keep);

        // restrict to the component of v; b must survive in it
        const auto comps = small.components();
        const std::size_t v_local = *small.index_of(v);
        const std::vector<std::size_t>* comp_of_v = nullptr;
        for (const auto& c : comps)
            if (std::find(c.begin(), c.end(), v_local) != c.end()) comp_of_v = &c;
        small = small.subgraph(*comp_of_v);
        if (!small.has_vertex(b)) continue;

        REQUIRE(escape_probability(small, v, b) <= escape_probability(big, v, b));
        ++tested;
    }
    REQUIRE(tested >= 25);
}
