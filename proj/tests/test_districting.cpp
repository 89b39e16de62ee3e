#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <sstream>

#include "gridtrees/districting.hpp"
#include "support/testutil.hpp"

using namespace gridtrees;

namespace {

DistrictPartition partition_by(const GridGraph& g, int districts,
                               const std::function<int(const Vertex&)>& rule) {
    DistrictPartition p{g, std::vector<int>(g.vertex_count(), 0), districts};
    for (std::size_t i = 0; i < g.vertex_count(); ++i) p.assignment[i] = rule(g.vertex(i));
    return p;
}

} // namespace

TEST_CASE("score of a 3x3 split into two column districts") {
    const GridGraph g = testutil::square(3);
    const DistrictPartition p =
        partition_by(g, 2, [](const Vertex& v) { return v.x <= 1 ? 1 : 2; });
    const PartitionScore s = score_partition(p);
    REQUIRE(s.cut_edges == 3);
    REQUIRE(s.district_areas == std::vector<std::size_t>{2, 0});
    REQUIRE(s.c1 == 4 + 2 - 1);
    REQUIRE(s.district_taus[1] == 1);  // the right column is a path
    REQUIRE_FALSE(s.district_simple[1]);
}

TEST_CASE("single district scores zero cut edges") {
    const GridGraph g = testutil::square(4);
    const DistrictPartition p = partition_by(g, 1, [](const Vertex&) { return 1; });
    const PartitionScore s = score_partition(p);
    REQUIRE(s.cut_edges == 0);
    REQUIRE(s.all_simple);

    // K = 1 reduces the sandwich to the two-sided bound on tau itself
    const SandwichVerdict v = verify_boundss(p, &s);
    REQUIRE(v.status == VerdictStatus::holds);
}

TEST_CASE("partition validation") {
    const GridGraph g = testutil::square(3);
    DistrictPartition split =
        partition_by(g, 2, [](const Vertex& v) { return (v.x == 0 || v.x == 2) ? 1 : 2; });
    REQUIRE_THROWS_WITH(score_partition(split), "district 1 disconnected");

    DistrictPartition missing = partition_by(g, 3, [](const Vertex&) { return 1; });
    REQUIRE_THROWS_WITH(validate_partition(missing), "district 2 is empty");
}

TEST_CASE("cut edge identity on the 4x4 half split") {
    const GridGraph g = testutil::square(4);
    const DistrictPartition p =
        partition_by(g, 2, [](const Vertex& v) { return v.y >= 2 ? 1 : 2; });
    const PartitionScore s = score_partition(p);
    REQUIRE(s.cut_edges == 4);
    REQUIRE(s.district_areas == std::vector<std::size_t>{3, 3});

    const IdentityVerdict iv = verify_redistrict_identity(p, &s);
    REQUIRE(iv.status == VerdictStatus::holds);
    REQUIRE(iv.cut_edges == 4);
    REQUIRE(iv.predicted == 9 + 2 - 1 - 3 - 3);

    const SandwichVerdict sv = verify_boundss(p, &s);
    REQUIRE(sv.status == VerdictStatus::holds);
    REQUIRE(sv.lower_ok);
    REQUIRE(sv.upper_ok);
}

TEST_CASE("identity is not applicable when a district is not simple") {
    const GridGraph g = testutil::square(3);
    const DistrictPartition p =
        partition_by(g, 2, [](const Vertex& v) { return v.x <= 1 ? 1 : 2; });
    const IdentityVerdict iv = verify_redistrict_identity(p);
    REQUIRE(iv.status == VerdictStatus::not_applicable);
    REQUIRE(iv.detail == "district 2 is not simple");
}

TEST_CASE("exhaustive 4x2 two-district partitions with simple districts satisfy the identity") {
    const GridGraph g = testutil::rectangle(4, 2);
    const std::size_t n = g.vertex_count();
    std::size_t applicable = 0;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); mask += 2) {  // vertex 0 fixed in district 1
        DistrictPartition p{g, std::vector<int>(n, 0), 2};
        for (std::size_t i = 0; i < n; ++i) p.assignment[i] = (mask & (1u << i)) ? 1 : 2;
        try {
            validate_partition(p);
        } catch (const std::invalid_argument&) {
            continue;
        }
        const PartitionScore s = score_partition(p);
        const IdentityVerdict iv = verify_redistrict_identity(p, &s);
        if (iv.status != VerdictStatus::holds) {
            REQUIRE(iv.status == VerdictStatus::not_applicable);
            continue;
        }
        const SandwichVerdict sv = verify_boundss(p, &s);
        REQUIRE(sv.status == VerdictStatus::holds);
        ++applicable;
    }
    REQUIRE(applicable >= 1);  // at least the half/half split qualifies
}

TEST_CASE("initial partitions") {
    const DistrictPartition blocks = initial_partition(testutil::square(30), 9);
    const PartitionScore s = score_partition(blocks);
    REQUIRE(s.c1 == 849);
    REQUIRE(s.cut_edges == 120);  // 4 internal lines of 30 edges
    REQUIRE(s.all_simple);

    const DistrictPartition quarters = initial_partition(testutil::square(12), 4);
    REQUIRE(score_partition(quarters).cut_edges == 24);

    // non-rectangular base falls back to page-order runs
    const GridGraph tri = induced_grid_graph({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {0, 2}});
    const DistrictPartition runs = initial_partition(tri, 2);
    REQUIRE_NOTHROW(validate_partition(runs));

    REQUIRE_THROWS_WITH(initial_partition(testutil::square(2), 5), "more districts than vertices");
}

TEST_CASE("ensemble: zero steps returns only the initial score") {
    const auto scores = run_ensemble(testutil::square(6), 4, 0, 123);
    REQUIRE(scores.size() == 1);
    REQUIRE(scores[0].cut_edges == 12);
}

TEST_CASE("ensemble runs are reproducible and sandwich-consistent") {
    const GridGraph g = testutil::square(6);
    const auto a = run_ensemble(g, 4, 40, 2024);
    const auto b = run_ensemble(g, 4, 40, 2024);
    REQUIRE(a.size() == 41);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].cut_edges == b[i].cut_edges);
        REQUIRE(a[i].district_taus == b[i].district_taus);
    }
    const auto c = run_ensemble(g, 4, 40, 2025);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].cut_edges != c[i].cut_edges;
    REQUIRE(differs);

    // certified sandwich from the exact per-district tree counts
    const BulkConstants& k = bulk_constants();
    for (const PartitionScore& s : a) {
        if (!s.all_simple) continue;
        Rational product(1);
        for (const BigInt& t : s.district_taus) product *= Rational(t);
        const long e = static_cast<long>(s.c1) - static_cast<long>(s.cut_edges);
        Rational lower_pow = rational_pow(k.b_hi, e);
        Rational upper_pow = rational_pow(Rational(4), e);
        REQUIRE((e <= 0 || lower_pow <= product));
        REQUIRE(product <= upper_pow);
    }
}

TEST_CASE("district sizes stay within the population tolerance along the chain") {
    const GridGraph g = testutil::square(6);
    const double ideal = 36.0 / 4.0;
    const double tol = 0.2;
    for (const PartitionScore& s : run_ensemble(g, 4, 30, 77, tol))
        for (std::size_t size : s.district_sizes) {
            REQUIRE(static_cast<double>(size) >= ideal * (1.0 - tol) - 1e-9);
            REQUIRE(static_cast<double>(size) <= ideal * (1.0 + tol) + 1e-9);
        }
}

TEST_CASE("scatter export") {
    std::ostringstream empty;
    write_scatter_csv({}, empty);
    REQUIRE(empty.str().find("step,cut_edges,spanning_score,all_simple\n") != std::string::npos);

    const auto scores = run_ensemble(testutil::square(30), 9, 0, 5);
    std::ostringstream os;
    write_scatter_csv(scores, os);
    const std::string text = os.str();
    REQUIRE(text.find("# intercept_c1 = 849\n") != std::string::npos);

    const auto slope_at = [&](const std::string& key) {
        const std::size_t pos = text.find(key);
        REQUIRE(pos != std::string::npos);
        return std::stod(text.substr(pos + key.size()));
    };
    REQUIRE_THAT(slope_at("# slope_lower = "), Catch::Matchers::WithinAbs(-0.857454, 1e-4));
    REQUIRE_THAT(slope_at("# slope_upper = "), Catch::Matchers::WithinAbs(-0.721348, 1e-4));
    REQUIRE(text.find("\n0,120,") != std::string::npos);
}
