#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gridtrees {

/// Lattice point. Page order reads like text: top row first, left to right.
struct Vertex {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend bool operator==(const Vertex&, const Vertex&) = default;
};

constexpr bool page_less(const Vertex& a, const Vertex& b) {
    if (a.y != b.y) return a.y > b.y;
    return a.x < b.x;
}

struct PageLess {
    constexpr bool operator()(const Vertex& a, const Vertex& b) const { return page_less(a, b); }
};

inline bool lattice_adjacent(const Vertex& a, const Vertex& b) {
    const std::int64_t dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const std::int64_t dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx + dy == 1;
}

inline std::array<Vertex, 4> lattice_neighbors(const Vertex& v) {
    return {Vertex{v.x + 1, v.y}, Vertex{v.x - 1, v.y}, Vertex{v.x, v.y + 1}, Vertex{v.x, v.y - 1}};
}

/// Unordered lattice edge, normalized so that `a` precedes `b` on the page.
struct Edge {
    Vertex a, b;
    friend bool operator==(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex u, Vertex v) {
    if (page_less(v, u)) std::swap(u, v);
    return Edge{u, v};
}

namespace detail {
// collision-free for |x|,|y| < 2^31, which covers every supported input
inline std::uint64_t pack_point(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
}
inline std::uint64_t pack_point(const Vertex& v) { return pack_point(v.x, v.y); }

using PointSet = std::unordered_set<std::uint64_t>;
} // namespace detail

/// Finite subgraph of the square lattice. Vertices are kept in page order;
/// edges are an explicit subset of the lattice edges between them (a graph
/// need not be induced). The empty graph is representable because prefix
/// graphs start empty; `induced_grid_graph` rejects empty input.
class GridGraph {
public:
    GridGraph() = default;

    GridGraph(std::vector<Vertex> vertices, const std::vector<Edge>& edges) {
        init_vertices(std::move(vertices));
        for (const Edge& e : edges) {
            auto i = index_of(e.a);
            auto j = index_of(e.b);
            if (!i || !j) throw std::invalid_argument("edge endpoint not in vertex set");
            if (!lattice_adjacent(e.a, e.b)) throw std::invalid_argument("edge is not a lattice edge");
            add_edge_indices(*i, *j);
        }
        finish_edges();
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return vertices_.empty(); }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const Vertex& vertex(std::size_t i) const { return vertices_[i]; }

    std::optional<std::size_t> index_of(const Vertex& v) const {
        auto it = lookup_.find(detail::pack_point(v));
        if (it == lookup_.end()) return std::nullopt;
        return it->second;
    }
    bool has_vertex(const Vertex& v) const { return index_of(v).has_value(); }

    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_[i]; }
    std::size_t degree(std::size_t i) const { return adj_[i].size(); }

    bool has_edge(std::size_t i, std::size_t j) const {
        const auto& n = adj_[i];
        return std::find(n.begin(), n.end(), j) != n.end();
    }
    bool has_edge(const Vertex& u, const Vertex& v) const {
        auto i = index_of(u);
        auto j = index_of(v);
        return i && j && has_edge(*i, *j);
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j : adj_[i])
                if (i < j) out.push_back(make_edge(vertices_[i], vertices_[j]));
        return out;
    }

    bool is_induced() const {
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const Vertex& v = vertices_[i];
            for (const Vertex& n : {Vertex{v.x + 1, v.y}, Vertex{v.x, v.y + 1}})
                if (auto j = index_of(n); j && !has_edge(i, *j)) return false;
        }
        return true;
    }

    std::vector<std::vector<std::size_t>> components() const {
        std::vector<std::vector<std::size_t>> comps;
        std::vector<char> seen(vertices_.size(), 0);
        for (std::size_t s = 0; s < vertices_.size(); ++s) {
            if (seen[s]) continue;
            std::vector<std::size_t> comp{s};
            seen[s] = 1;
            for (std::size_t q = 0; q < comp.size(); ++q)
                for (std::size_t n : adj_[comp[q]])
                    if (!seen[n]) {
                        seen[n] = 1;
                        comp.push_back(n);
                    }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        return comps;
    }

    bool connected() const {
        if (vertices_.empty()) return false;
        return components().size() == 1;
    }

    /// Subgraph on the first `count` page-order vertices, keeping this
    /// graph's edges between them.
    GridGraph prefix(std::size_t count) const {
        if (count > vertices_.size()) throw std::invalid_argument("prefix length exceeds vertex count");
        GridGraph out;
        out.init_vertices({vertices_.begin(), vertices_.begin() + static_cast<std::ptrdiff_t>(count)});
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j : adj_[i])
                if (j < i) out.add_edge_indices(i, j);
        out.finish_edges();
        return out;
    }

    /// Subgraph induced (within this graph's edge set) by the given indices.
    GridGraph subgraph(const std::vector<std::size_t>& indices) const {
        std::vector<std::size_t> sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::unordered_map<std::size_t, std::size_t> remap;
        std::vector<Vertex> verts;
        verts.reserve(sorted.size());
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            remap[sorted[k]] = k;
            verts.push_back(vertices_[sorted[k]]);
        }
        GridGraph out;
        out.init_vertices(std::move(verts));
        for (std::size_t old_i : sorted)
            for (std::size_t old_j : adj_[old_i])
                if (old_j < old_i)
                    if (auto it = remap.find(old_j); it != remap.end())
                        out.add_edge_indices(remap[old_i], it->second);
        out.finish_edges();
        return out;
    }

    GridGraph translated(std::int64_t dx, std::int64_t dy) const {
        GridGraph out;
        std::vector<Vertex> verts = vertices_;
        for (Vertex& v : verts) {
            v.x += dx;
            v.y += dy;
        }
        out.init_vertices(std::move(verts));
        out.adj_ = adj_;
        out.edge_count_ = edge_count_;
        return out;
    }

    friend bool operator==(const GridGraph& a, const GridGraph& b) {
        return a.vertices_ == b.vertices_ && a.adj_ == b.adj_;
    }

private:
    friend GridGraph induced_grid_graph(std::vector<Vertex>);

    void init_vertices(std::vector<Vertex> vertices) {
        std::sort(vertices.begin(), vertices.end(), PageLess{});
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        vertices_ = std::move(vertices);
        adj_.assign(vertices_.size(), {});
        lookup_.clear();
        lookup_.reserve(vertices_.size() * 2);
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            lookup_.emplace(detail::pack_point(vertices_[i]), i);
        if (lookup_.size() != vertices_.size()) throw std::invalid_argument("vertex coordinates out of range");
    }

    void add_edge_indices(std::size_t i, std::size_t j) {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
    }

    void finish_edges() {
        edge_count_ = 0;
        for (auto& n : adj_) {
            std::sort(n.begin(), n.end());
            n.erase(std::unique(n.begin(), n.end()), n.end());
            edge_count_ += n.size();
        }
        edge_count_ /= 2;
    }

    std::vector<Vertex> vertices_;
    std::vector<std::vector<std::size_t>> adj_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;
    std::size_t edge_count_ = 0;
};

/// Graph with all lattice edges among the given vertices.
inline GridGraph induced_grid_graph(std::vector<Vertex> vertices) {
    if (vertices.empty()) throw std::invalid_argument("empty graph");
    GridGraph g;
    g.init_vertices(std::move(vertices));
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
        const Vertex& v = g.vertices_[i];
        for (const Vertex& n : {Vertex{v.x + 1, v.y}, Vertex{v.x, v.y + 1}})
            if (auto j = g.index_of(n)) g.add_edge_indices(i, *j);
    }
    g.finish_edges();
    return g;
}

/// Unit cell identified by its bottom-right corner: the face of the lattice
/// spanning [x-1, x] x [y, y+1].
struct Cell {
    Vertex bottom_right;
    friend bool operator==(const Cell&, const Cell&) = default;

    std::array<Vertex, 4> corners() const {
        const auto [x, y] = bottom_right;
        return {Vertex{x - 1, y}, Vertex{x, y}, Vertex{x - 1, y + 1}, Vertex{x, y + 1}};
    }
    std::array<Edge, 4> sides() const {
        const auto [x, y] = bottom_right;
        return {make_edge({x - 1, y}, {x, y}), make_edge({x - 1, y + 1}, {x, y + 1}),
                make_edge({x - 1, y}, {x - 1, y + 1}), make_edge({x, y}, {x, y + 1})};
    }
};

/// True when all four corners and all four sides of the cell are in g.
inline bool is_face(const GridGraph& g, const Cell& c) {
    for (const Vertex& v : c.corners())
        if (!g.has_vertex(v)) return false;
    for (const Edge& e : c.sides())
        if (!g.has_edge(e.a, e.b)) return false;
    return true;
}

/// All faces of g, in page order of their bottom-right corners.
inline std::vector<Cell> faces(const GridGraph& g) {
    std::vector<Cell> out;
    for (const Vertex& v : g.vertices())
        if (is_face(g, Cell{v})) out.push_back(Cell{v});
    return out;
}

inline std::size_t area(const GridGraph& g) { return faces(g).size(); }

/// Vertices whose up-left unit cell is not fully contained in g.
inline std::vector<Vertex> top_left_boundary(const GridGraph& g) {
    std::vector<Vertex> out;
    for (const Vertex& v : g.vertices())
        if (!is_face(g, Cell{v})) out.push_back(v);
    return out;
}

struct SimplicityReport {
    bool is_simple = false;
    std::vector<Vertex> boundary_loop;  // nonempty iff simple
    std::size_t boundary_size = 0;
    std::size_t area = 0;
};

/// Decides whether g consists of exactly the vertices and edges on and
/// inside one simple closed lattice loop. The test checks that g is the
/// union of its faces, that the face set is edge-connected, hole-free and
/// pinch-free, and then traces the single boundary curve.
inline SimplicityReport check_simple(const GridGraph& g) {
    SimplicityReport report;
    const std::vector<Cell> fs = faces(g);
    report.area = fs.size();
    if (fs.empty()) return report;

    detail::PointSet face_set;
    for (const Cell& c : fs) face_set.insert(detail::pack_point(c.bottom_right));
    auto is_face_cell = [&](std::int64_t x, std::int64_t y) {
        return face_set.count(detail::pack_point(x, y)) > 0;
    };

    // g must equal the union of its faces
    detail::PointSet face_vertices;
    std::size_t face_edges = 0;
    std::unordered_map<std::uint64_t, std::unordered_set<std::uint64_t>> edge_seen;
    for (const Cell& c : fs) {
        for (const Vertex& v : c.corners()) face_vertices.insert(detail::pack_point(v));
        for (const Edge& e : c.sides()) {
            auto [it, fresh] = edge_seen[detail::pack_point(e.a)].insert(detail::pack_point(e.b));
            if (fresh) ++face_edges;
        }
    }
    if (face_vertices.size() != g.vertex_count() || face_edges != g.edge_count()) return report;
    for (const Vertex& v : g.vertices())
        if (!face_vertices.count(detail::pack_point(v))) return report;

    // faces connected under shared-edge adjacency
    {
        detail::PointSet reached;
        std::deque<Vertex> queue{fs.front().bottom_right};
        reached.insert(detail::pack_point(fs.front().bottom_right));
        while (!queue.empty()) {
            Vertex c = queue.front();
            queue.pop_front();
            for (const Vertex& n : lattice_neighbors(c))
                if (is_face_cell(n.x, n.y) && reached.insert(detail::pack_point(n)).second)
                    queue.push_back(n);
        }
        if (reached.size() != fs.size()) return report;
    }

    // no holes: every non-face cell in the padded bounding box must reach
    // the outside through cell adjacency avoiding faces
    {
        std::int64_t lox = fs.front().bottom_right.x, hix = lox;
        std::int64_t loy = fs.front().bottom_right.y, hiy = loy;
        for (const Cell& c : fs) {
            lox = std::min(lox, c.bottom_right.x);
            hix = std::max(hix, c.bottom_right.x);
            loy = std::min(loy, c.bottom_right.y);
            hiy = std::max(hiy, c.bottom_right.y);
        }
        --lox; ++hix; --loy; ++hiy;
        detail::PointSet outside;
        std::deque<Vertex> queue{{lox, loy}};
        outside.insert(detail::pack_point(lox, loy));
        while (!queue.empty()) {
            Vertex c = queue.front();
            queue.pop_front();
            for (const Vertex& n : lattice_neighbors(c)) {
                if (n.x < lox || n.x > hix || n.y < loy || n.y > hiy) continue;
                if (is_face_cell(n.x, n.y)) continue;
                if (outside.insert(detail::pack_point(n)).second) queue.push_back(n);
            }
        }
        const std::size_t box_cells =
            static_cast<std::size_t>(hix - lox + 1) * static_cast<std::size_t>(hiy - loy + 1);
        if (outside.size() + fs.size() != box_cells) return report;  // some empty cell is enclosed
    }

    // no pinch: at every vertex, the incident faces must not be exactly two
    // diagonally opposite cells
    for (const Vertex& w : g.vertices()) {
        const bool ul = is_face_cell(w.x, w.y);
        const bool ur = is_face_cell(w.x + 1, w.y);
        const bool dl = is_face_cell(w.x, w.y - 1);
        const bool dr = is_face_cell(w.x + 1, w.y - 1);
        if ((ul && dr && !ur && !dl) || (ur && dl && !ul && !dr)) return report;
    }

    // boundary = edges incident to exactly one face; trace the loop
    std::unordered_map<std::uint64_t, std::vector<Vertex>> boundary_adj;
    std::size_t boundary_edges = 0;
    for (const Vertex& v : g.vertices()) {
        auto consider = [&](const Vertex& u, bool f1, bool f2) {
            if (!g.has_edge(v, u)) return;
            if (f1 == f2) return;  // 0 or 2 incident faces
            boundary_adj[detail::pack_point(v)].push_back(u);
            ++boundary_edges;
        };
        // horizontal edge v-(v.x+1,v.y): faces above and below
        consider({v.x + 1, v.y}, is_face_cell(v.x + 1, v.y), is_face_cell(v.x + 1, v.y - 1));
        consider({v.x - 1, v.y}, is_face_cell(v.x, v.y), is_face_cell(v.x, v.y - 1));
        // vertical edge v-(v.x,v.y+1): faces left and right
        consider({v.x, v.y + 1}, is_face_cell(v.x, v.y), is_face_cell(v.x + 1, v.y));
        consider({v.x, v.y - 1}, is_face_cell(v.x, v.y - 1), is_face_cell(v.x + 1, v.y - 1));
    }
    boundary_edges /= 2;  // each edge recorded from both endpoints
    for (const auto& [key, adj] : boundary_adj)
        if (adj.size() != 2) return report;

    std::optional<Vertex> start;
    for (const Vertex& v : g.vertices())
        if (boundary_adj.count(detail::pack_point(v))) {
            start = v;
            break;
        }
    if (!start) return report;
    std::vector<Vertex> loop{*start};
    Vertex prev = *start;
    const auto& first_adj = boundary_adj[detail::pack_point(*start)];
    Vertex cur = page_less(first_adj[0], first_adj[1]) ? first_adj[0] : first_adj[1];
    while (!(cur == *start)) {
        loop.push_back(cur);
        const auto& adj = boundary_adj[detail::pack_point(cur)];
        Vertex next = (adj[0] == prev) ? adj[1] : adj[0];
        prev = cur;
        cur = next;
    }
    if (loop.size() != boundary_edges) return report;  // more than one boundary curve

    report.is_simple = true;
    report.boundary_loop = std::move(loop);
    report.boundary_size = boundary_edges;
    return report;
}

struct BoundaryIdentity {
    bool holds = false;
    bool top_left_subset_of_boundary = false;
    std::size_t top_left_size = 0;
    std::size_t boundary_size = 0;
};

/// Checks |top-left boundary| = |boundary|/2 + 1 and the subset relation on
/// a simple grid graph. A failure would indicate an implementation bug.
inline BoundaryIdentity boundary_identity_check(const GridGraph& g) {
    const SimplicityReport rep = check_simple(g);
    if (!rep.is_simple) throw std::invalid_argument("requires simple grid graph");
    BoundaryIdentity out;
    out.boundary_size = rep.boundary_size;
    const std::vector<Vertex> tlb = top_left_boundary(g);
    out.top_left_size = tlb.size();
    detail::PointSet loop_set;
    for (const Vertex& v : rep.boundary_loop) loop_set.insert(detail::pack_point(v));
    out.top_left_subset_of_boundary = std::all_of(tlb.begin(), tlb.end(), [&](const Vertex& v) {
        return loop_set.count(detail::pack_point(v)) > 0;
    });
    out.holds = out.top_left_subset_of_boundary && rep.boundary_size % 2 == 0 &&
                out.top_left_size == rep.boundary_size / 2 + 1;
    return out;
}

} // namespace gridtrees
