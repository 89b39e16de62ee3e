#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridtrees/constants.hpp"
#include "gridtrees/exact.hpp"
#include "gridtrees/lattice.hpp"
#include "gridtrees/randwalk.hpp"
#include "gridtrees/treecount.hpp"

namespace gridtrees {

enum class BoundVerdict { pass, fail, not_applicable, indeterminate };

inline const char* to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::pass: return "pass";
        case BoundVerdict::fail: return "fail";
        case BoundVerdict::not_applicable: return "not-applicable";
        default: return "indeterminate";
    }
}

/// Every bound evaluated for one connected grid graph. Log-space numbers are
/// for reporting; the verdicts come from exact or bracket-certified
/// comparisons of the integer tree count itself.
struct BoundsReport {
    std::size_t vertices = 0;
    std::size_t m = 0;  // |V| - |top-left boundary| = number of faces
    double ln_tau = 0.0;
    double bulk_limit_log = 0.0;        // (4C/pi) |V|
    double lower_log = 0.0;          // m ln b
    double upper_log = 0.0;          // m ln 4
    double refined_upper_log = 0.0;  // sum over k>=2 of ln F(k) |G^k|
    bool simple = false;
    std::map<int, std::size_t> level_set_sizes;  // k -> |{v : depth v = k}|
    BoundVerdict bulk_limit = BoundVerdict::indeterminate;
    BoundVerdict lower = BoundVerdict::indeterminate;
    BoundVerdict upper = BoundVerdict::not_applicable;
    BoundVerdict refined = BoundVerdict::not_applicable;
};

inline BoundsReport evaluate_bounds(const GridGraph& g, int max_k = 12) {
    if (!g.connected()) throw std::invalid_argument("bounds require a connected graph");
    if (max_k < 2) throw std::invalid_argument("max_k must be at least 2");
    const BulkConstants& c = bulk_constants();

    BoundsReport r;
    r.vertices = g.vertex_count();
    const TreeCount tc = tau(g);
    r.ln_tau = tc.log_value;
    r.bulk_limit_log = c.ln_b * static_cast<double>(r.vertices);
    r.m = r.vertices - top_left_boundary(g).size();
    r.lower_log = c.ln_b * static_cast<double>(r.m);
    r.upper_log = c.ln4 * static_cast<double>(r.m);
    r.simple = check_simple(g).is_simple;

    const Rational tau_q(tc.value);
    const long n = static_cast<long>(r.vertices);
    const long m = static_cast<long>(r.m);

    // bulk limit: tau < b^|V|, strict
    if (tau_q < rational_pow(c.b_lo, n))
        r.bulk_limit = BoundVerdict::pass;
    else if (tau_q >= rational_pow(c.b_hi, n))
        r.bulk_limit = BoundVerdict::fail;
    else
        r.bulk_limit = BoundVerdict::indeterminate;

    // lower: tau >= b^m, any connected grid graph
    if (m == 0)
        r.lower = BoundVerdict::pass;  // tau >= 1 always
    else if (tau_q >= rational_pow(c.b_hi, m))
        r.lower = BoundVerdict::pass;
    else if (tau_q < rational_pow(c.b_lo, m))
        r.lower = BoundVerdict::fail;
    else
        r.lower = BoundVerdict::indeterminate;

    for (const Vertex& v : g.vertices()) ++r.level_set_sizes[depth(g, v)];

    if (r.simple) {
        // upper: tau <= 4^m, exact integers
        r.upper = tau_q <= rational_pow(Rational(4), m) ? BoundVerdict::pass : BoundVerdict::fail;

        // refined: tau <= prod F(k)^{|G^k|}, with F(max_k) standing in for
        // deeper levels (valid since F is non-increasing); exact rationals
        Rational refined_product(1);
        double refined_log = 0.0;
        for (const auto& [k, count] : r.level_set_sizes) {
            if (k < 2) continue;
            const Rational fk = multiplier_bound(std::min(k, max_k));
            refined_product *= rational_pow(fk, static_cast<long>(count));
            refined_log += static_cast<double>(count) *
                           Real::of_rational(fk, MPFR_RNDN).log(MPFR_RNDN).to_double();
        }
        r.refined_upper_log = refined_log;
        r.refined = tau_q <= refined_product ? BoundVerdict::pass : BoundVerdict::fail;
    }
    return r;
}

/// One row of the square-exhaustion trend toward the bulk limit.
struct TrendRow {
    int n = 0;
    std::size_t vertices = 0;
    double ln_tau = 0.0;
    double per_vertex = 0.0;  // ln tau / |V|, increasing toward 4C/pi
};

inline std::vector<TrendRow> bulk_limit_trend(const std::vector<int>& sizes) {
    int prev = 1;
    for (int n : sizes) {
        if (n < 2 || n <= prev) throw std::invalid_argument("sizes must be increasing and at least 2");
        prev = n;
    }
    std::vector<TrendRow> rows;
    for (int n : sizes) {
        std::vector<Vertex> verts;
        verts.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) verts.push_back({x, y});
        const GridGraph square = induced_grid_graph(std::move(verts));
        const TreeCount tc = tau(square);
        rows.push_back({n, square.vertex_count(), tc.log_value,
                        tc.log_value / static_cast<double>(square.vertex_count())});
    }
    return rows;
}

inline void write_bounds_text(const BoundsReport& r, std::ostream& os) {
    os.precision(12);
    os << "vertices: " << r.vertices << "\n"
       << "simple: " << (r.simple ? "yes" : "no") << "\n"
       << "m: " << r.m << "\n"
       << "ln_tau: " << r.ln_tau << "\n"
       << "bulk_limit_log: " << r.bulk_limit_log << "\n"
       << "bulk_limit: " << to_string(r.bulk_limit) << "\n"
       << "lower_log: " << r.lower_log << "\n"
       << "lower: " << to_string(r.lower) << "\n"
       << "upper_log: " << r.upper_log << "\n"
       << "upper: " << to_string(r.upper)
       << (r.simple ? "" : " (non-simple)") << "\n"
       << "refined_upper_log: " << r.refined_upper_log << "\n"
       << "refined: " << to_string(r.refined) << (r.simple ? "" : " (non-simple)") << "\n";
    os << "level_sets:";
    for (const auto& [k, count] : r.level_set_sizes) os << " " << k << ":" << count;
    os << "\n";
}

inline std::string bounds_csv_header() {
    return "vertices,simple,m,ln_tau,bulk_limit_log,bulk_limit,lower_log,lower,upper_log,upper,"
           "refined_upper_log,refined";
}

inline std::string bounds_csv_row(const BoundsReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << r.vertices << "," << (r.simple ? 1 : 0) << "," << r.m << "," << r.ln_tau << ","
       << r.bulk_limit_log << "," << to_string(r.bulk_limit) << "," << r.lower_log << ","
       << to_string(r.lower) << "," << r.upper_log << "," << to_string(r.upper) << ","
       << r.refined_upper_log << "," << to_string(r.refined);
    return os.str();
}

} // namespace gridtrees
