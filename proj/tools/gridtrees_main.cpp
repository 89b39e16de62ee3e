#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gridtrees/gridtrees.hpp"

namespace {

using namespace gridtrees;

GridGraph load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open file: " + path);
    return read_grid(in);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file_atomic(out_path, content);
}

int run_count(const std::string& input) {
    const GridGraph g = load_grid(input);
    const TreeCount tc = tau(g);
    std::cout << "tau = " << tc.value.get_str() << "\n";
    std::cout << "ln_tau = " << Real::of_integer(tc.value, MPFR_RNDN).log(MPFR_RNDN).str_significant(12)
              << "\n";
    const std::size_t comps = g.components().size();
    if (comps > 1)
        std::cout << "note = graph is disconnected (" << comps
                  << " components); tau is the product over components\n";
    return 0;
}

int run_multipliers(const std::string& input, const std::string& out) {
    const GridGraph g = load_grid(input);
    std::ostringstream os;
    write_heatmap_csv(multiplier_profile(g), os);
    emit(out, os.str());
    return 0;
}

int run_bounds(const std::string& input, int max_k, const std::string& out) {
    const GridGraph g = load_grid(input);
    std::ostringstream os;
    write_bounds_text(evaluate_bounds(g, max_k), os);
    emit(out, os.str());
    return 0;
}

int run_fk_table(int max_k, const std::string& out) {
    std::ostringstream os;
    os << "k,f_exact,f_decimal\n";
    for (int k = 2; k <= max_k; ++k) {
        const Rational f = multiplier_bound(k);
        os << k << "," << to_fraction_string(f) << "," << rational_to_fixed(f, 10) << "\n";
    }
    emit(out, os.str());
    return 0;
}

int run_partition(const std::string& input, const std::string& partition_path) {
    const GridGraph g = load_grid(input);
    std::ifstream in(partition_path);
    if (!in) throw ParseError(0, "cannot open file: " + partition_path);
    const DistrictPartition p = read_partition(in, g);
    const PartitionScore s = score_partition(p);

    std::cout.precision(12);
    std::cout << "districts: " << p.districts << "\n";
    std::cout << "cut_edges: " << s.cut_edges << "\n";
    std::cout << "c1: " << s.c1 << "\n";
    std::cout << "spanning_score: " << s.spanning_score << "\n";
    for (std::size_t d = 0; d < s.district_areas.size(); ++d)
        std::cout << "district " << d + 1 << ": area=" << s.district_areas[d]
                  << " tau=" << s.district_taus[d].get_str()
                  << " simple=" << (s.district_simple[d] ? "yes" : "no") << "\n";

    const IdentityVerdict iv = verify_redistrict_identity(p, &s);
    std::cout << "cut_edge_identity: " << to_string(iv.status);
    if (iv.status == VerdictStatus::not_applicable)
        std::cout << " (" << iv.detail << ")";
    else
        std::cout << " (cut_edges=" << iv.cut_edges << ", predicted=" << iv.predicted << ")";
    std::cout << "\n";

    const SandwichVerdict sv = verify_boundss(p, &s);
    std::cout << "score_sandwich: " << to_string(sv.status);
    if (sv.status == VerdictStatus::not_applicable)
        std::cout << " (" << sv.detail << ")";
    else
        std::cout << " (lower_line=" << sv.lower_line << ", upper_line=" << sv.upper_line << ")";
    std::cout << "\n";
    return 0;
}

int run_ensemble_cmd(const std::string& input, int districts, std::size_t steps,
                     std::uint64_t seed, double pop_tolerance, const std::string& out) {
    const GridGraph g = load_grid(input);
    const std::vector<PartitionScore> scores = run_ensemble(g, districts, steps, seed, pop_tolerance);
    std::ostringstream os;
    write_scatter_csv(scores, os);
    emit(out, os.str());
    return 0;
}

int run_sample_tree(const std::string& input, std::uint64_t seed, const std::string& out) {
    const GridGraph g = load_grid(input);
    const std::vector<Edge> tree = sample_uniform_spanning_tree(g, seed);
    const GridGraph tree_graph(g.vertices(), tree);
    std::ostringstream os;
    write_grid(tree_graph, os);
    emit(out, os.str());
    return 0;
}

int run_escape(const std::string& input, std::size_t samples, std::uint64_t seed,
               const std::string& out) {
    const GridGraph g = load_grid(input);
    std::ostringstream os;
    os << "x,y,escape,absorb_at_start,both_edges,multiplier_exact,multiplier";
    if (samples > 0) os << ",estimate,consistent";
    os << "\n";
    std::uint64_t stream = 0;
    for (const Vertex& v : g.vertices()) {
        GridGraph h = g.prefix(*g.index_of(v) + 1);
        if (!is_face(h, Cell{v})) continue;  // top-left boundary has no triple
        const EscapeTriple t = escape_triple(g, v);
        os << v.x << "," << v.y << "," << rational_to_decimal(t.escape, 12) << ","
           << rational_to_decimal(t.absorb_at_start, 12) << ","
           << rational_to_decimal(t.both_edges, 12) << "," << to_fraction_string(t.multiplier)
           << "," << rational_to_decimal(t.multiplier, 12);
        if (samples > 0) {
            const BothEdgesEstimate e =
                estimate_both_edges(g, v, samples, Rng(seed).substream(stream++).seed());
            os << "," << e.estimate << "," << (e.consistent ? 1 : 0);
        }
        os << "\n";
    }
    emit(out, os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact spanning-tree counts, multipliers, random-walk bounds and district scores "
                 "for grid graphs"};
    app.require_subcommand(1);

    std::string input, out, partition_path;
    int max_k = 12;
    int districts = 2;
    std::size_t steps = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double pop_tolerance = 0.05;
    std::function<int()> action;

    auto* count = app.add_subcommand("count", "exact spanning-tree count of a grid file");
    count->add_option("--input", input, "grid file")->required();
    count->callback([&] { action = [&] { return run_count(input); }; });

    auto* mult = app.add_subcommand("multipliers", "per-vertex multiplier heatmap CSV");
    mult->add_option("--input", input, "grid file")->required();
    mult->add_option("--out", out, "output CSV (stdout when omitted)");
    mult->callback([&] { action = [&] { return run_multipliers(input, out); }; });

    auto* bounds = app.add_subcommand("bounds", "evaluate every bound for a grid file");
    bounds->add_option("--input", input, "grid file")->required();
    bounds->add_option("--max-k", max_k, "deepest exact F(k) level")->check(CLI::Range(2, 64));
    bounds->add_option("--out", out, "output file (stdout when omitted)");
    bounds->callback([&] { action = [&] { return run_bounds(input, max_k, out); }; });

    auto* fk = app.add_subcommand("fk-table", "table of the multiplier bounds F(k)");
    fk->add_option("--max-k", max_k, "largest k")->required()->check(CLI::Range(2, 64));
    fk->add_option("--out", out, "output CSV (stdout when omitted)");
    fk->callback([&] { action = [&] { return run_fk_table(max_k, out); }; });

    auto* part = app.add_subcommand("partition", "score a district partition");
    part->add_option("--input", input, "grid file")->required();
    part->add_option("--partition", partition_path, "partition file")->required();
    part->callback([&] { action = [&] { return run_partition(input, partition_path); }; });

    auto* ens = app.add_subcommand("ensemble", "recombination chain scatter CSV");
    ens->add_option("--input", input, "grid file")->required();
    ens->add_option("--districts", districts, "number of districts")->required()->check(CLI::Range(2, 1 << 20));
    ens->add_option("--steps", steps, "chain steps")->required();
    ens->add_option("--seed", seed, "RNG seed")->required();
    ens->add_option("--pop-tolerance", pop_tolerance, "district size tolerance")
        ->check(CLI::Range(0.0, 1.0));
    ens->add_option("--out", out, "output CSV (stdout when omitted)");
    ens->callback([&] {
        action = [&] { return run_ensemble_cmd(input, districts, steps, seed, pop_tolerance, out); };
    });

    auto* tree = app.add_subcommand("sample-tree", "uniform spanning tree as a grid file");
    tree->add_option("--input", input, "grid file")->required();
    tree->add_option("--seed", seed, "RNG seed")->required();
    tree->add_option("--out", out, "output file (stdout when omitted)");
    tree->callback([&] { action = [&] { return run_sample_tree(input, seed, out); }; });

    auto* esc = app.add_subcommand("escape", "exact escape probabilities per interior vertex");
    esc->add_option("--input", input, "grid file")->required();
    auto* esc_samples = esc->add_option("--samples", samples, "Monte-Carlo samples per vertex");
    esc->add_option("--seed", seed, "RNG seed (required with --samples)")->needs(esc_samples);
    esc->add_option("--out", out, "output CSV (stdout when omitted)");
    esc->callback([&] {
        if (samples > 0 && esc->count("--seed") == 0)
            throw CLI::RequiredError("--seed (sampling needs an explicit seed)");
        action = [&] { return run_escape(input, samples, seed, out); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const gridtrees::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
