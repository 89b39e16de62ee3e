#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridtrees/districting.hpp"
#include "gridtrees/lattice.hpp"

namespace gridtrees {

/// Input-file failure carrying the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline bool parse_coord(const std::string& tok, std::int64_t& out) {
    if (tok.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(tok, &pos);
    } catch (...) {
        return false;
    }
    if (pos != tok.size()) return false;
    if (out > 1000000000LL || out < -1000000000LL) return false;  // keep packing collision-free
    return true;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

} // namespace detail

/// Grid file: `v x y` per vertex, optional `e x1 y1 x2 y2` per edge, `#`
/// comments. A file without `e` lines describes the induced graph.
inline GridGraph read_grid(std::istream& is) {
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    bool saw_edge_line = false;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "v") {
            if (toks.size() != 3) throw ParseError(lineno, "expected 'v x y'");
            Vertex v;
            if (!detail::parse_coord(toks[1], v.x) || !detail::parse_coord(toks[2], v.y))
                throw ParseError(lineno, "bad coordinate");
            verts.push_back(v);
        } else if (toks[0] == "e") {
            if (toks.size() != 5) throw ParseError(lineno, "expected 'e x1 y1 x2 y2'");
            Vertex a, b;
            if (!detail::parse_coord(toks[1], a.x) || !detail::parse_coord(toks[2], a.y) ||
                !detail::parse_coord(toks[3], b.x) || !detail::parse_coord(toks[4], b.y))
                throw ParseError(lineno, "bad coordinate");
            if (!lattice_adjacent(a, b)) throw ParseError(lineno, "edge is not a lattice edge");
            edges.push_back(make_edge(a, b));
            saw_edge_line = true;
        } else {
            throw ParseError(lineno, "unknown record '" + toks[0] + "'");
        }
    }
    if (verts.empty()) throw ParseError(lineno, "no vertices");
    if (!saw_edge_line) return induced_grid_graph(std::move(verts));
    try {
        return GridGraph(std::move(verts), edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
    }
}

inline void write_grid(const GridGraph& g, std::ostream& os) {
    for (const Vertex& v : g.vertices()) os << "v " << v.x << " " << v.y << "\n";
    if (!g.is_induced())
        for (const Edge& e : g.edges())
            os << "e " << e.a.x << " " << e.a.y << " " << e.b.x << " " << e.b.y << "\n";
}

/// Partition file: `x y district_id` per vertex, `#` comments. Every vertex
/// of the base graph must be covered exactly once.
inline DistrictPartition read_partition(std::istream& is, const GridGraph& base) {
    DistrictPartition p{base, std::vector<int>(base.vertex_count(), 0), 0};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 3) throw ParseError(lineno, "expected 'x y district_id'");
        Vertex v;
        std::int64_t d = 0;
        if (!detail::parse_coord(toks[0], v.x) || !detail::parse_coord(toks[1], v.y) ||
            !detail::parse_coord(toks[2], d))
            throw ParseError(lineno, "bad value");
        if (d < 1) throw ParseError(lineno, "district ids are 1-based");
        auto idx = base.index_of(v);
        if (!idx) throw ParseError(lineno, "vertex not in base graph");
        if (p.assignment[*idx] != 0) throw ParseError(lineno, "vertex assigned twice");
        p.assignment[*idx] = static_cast<int>(d);
        p.districts = std::max(p.districts, static_cast<int>(d));
    }
    for (std::size_t i = 0; i < p.assignment.size(); ++i)
        if (p.assignment[i] == 0) throw ParseError(lineno, "vertex left unassigned");
    return p;
}

inline void write_partition(const DistrictPartition& p, std::ostream& os) {
    for (std::size_t i = 0; i < p.base.vertex_count(); ++i) {
        const Vertex& v = p.base.vertex(i);
        os << v.x << " " << v.y << " " << p.assignment[i] << "\n";
    }
}

/// Writes via a sibling temp file and renames, so readers never observe a
/// partially written output.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace gridtrees
