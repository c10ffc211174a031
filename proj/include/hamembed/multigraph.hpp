#pragma once

// Loop-aware edge-colored multigraph. Parallel edges and parallel loops are
// kept as individual records so that detachment can move edge ends one at a
// time. Values are cheap to copy at the instance sizes this library targets;
// all queries are pure.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamembed {

enum class VertexTier : std::uint8_t { original = 0, added = 1 };

// (part, slot, tier) identifies a vertex within one graph. Parts and slots
// are 1-based; the hub vertices created while embedding use tier `added`
// (the hub itself sits at part 0, slot 0).
struct VertexId {
    int part = 0;
    int slot = 0;
    VertexTier tier = VertexTier::original;

    friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

inline std::string to_string(const VertexId& v) {
    std::string s = "p" + std::to_string(v.part) + ".v" + std::to_string(v.slot);
    if (v.tier == VertexTier::added) s += "+";
    return s;
}

// Undirected edge; endpoints are stored normalized (a <= b). A loop has
// a == b. Color 0 means "not yet colored".
struct Edge {
    VertexId a;
    VertexId b;
    int color = 0;

    bool is_loop() const { return a == b; }
    bool touches(const VertexId& v) const { return a == v || b == v; }
    VertexId other(const VertexId& v) const { return a == v ? b : a; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(VertexId x, VertexId y, int color) {
    if (y < x) std::swap(x, y);
    return Edge{x, y, color};
}

class ColoredMultigraph {
public:
    static constexpr int uncolored = 0;

    ColoredMultigraph() = default;
    explicit ColoredMultigraph(int max_color) : max_color_(max_color) {}

    int max_color() const { return max_color_; }
    void set_max_color(int k) {
        if (k < 0) throw std::domain_error("max_color must be >= 0");
        for (const Edge& e : edges_)
            if (e.color > k) throw std::domain_error("edge color exceeds new max_color");
        max_color_ = k;
    }

    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_vertex(const VertexId& v) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }

    void add_vertex(const VertexId& v) {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it != vertices_.end() && *it == v) return;
        vertices_.insert(it, v);
    }

    void add_edge(const VertexId& x, const VertexId& y, int color) {
        require_vertex(x);
        require_vertex(y);
        if (color < 0 || color > max_color_)
            throw std::domain_error("edge color out of declared range");
        edges_.push_back(make_edge(x, y, color));
    }

    // Mutators used while a stage builds its graph; published values are
    // treated as immutable by every consumer.
    void set_edge_color(std::size_t index, int color) {
        if (index >= edges_.size()) throw std::domain_error("edge index out of range");
        if (color < 0 || color > max_color_)
            throw std::domain_error("edge color out of declared range");
        edges_[index].color = color;
    }

    void set_edge_end(std::size_t index, const VertexId& from, const VertexId& to) {
        if (index >= edges_.size()) throw std::domain_error("edge index out of range");
        require_vertex(to);
        Edge& e = edges_[index];
        if (e.a == from) e = make_edge(to, e.b, e.color);
        else if (e.b == from) e = make_edge(e.a, to, e.color);
        else throw std::domain_error("edge does not touch the given endpoint");
    }

    void remove_vertex_if_isolated(const VertexId& v) {
        for (const Edge& e : edges_)
            if (e.touches(v)) throw std::domain_error("vertex still has incident edges");
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it != vertices_.end() && *it == v) vertices_.erase(it);
    }

    void rename_vertex(const VertexId& from, const VertexId& to) {
        require_vertex(from);
        if (from == to) return;
        if (has_vertex(to)) throw std::domain_error("rename target already exists");
        vertices_.erase(std::lower_bound(vertices_.begin(), vertices_.end(), from));
        add_vertex(to);
        for (Edge& e : edges_) {
            VertexId a = e.a == from ? to : e.a;
            VertexId b = e.b == from ? to : e.b;
            e = make_edge(a, b, e.color);
        }
    }

    // Degree of v; loops contribute two. With a color argument, the degree
    // within that color class.
    long degree(const VertexId& v) const { return degree_impl(v, -1); }
    long degree(const VertexId& v, int color) const { return degree_impl(v, color); }

    long loop_count(const VertexId& v) const { return loop_count_impl(v, -1); }
    long loop_count(const VertexId& v, int color) const { return loop_count_impl(v, color); }

    // Number of edges joining v and w, summed over all colors.
    long multiplicity(const VertexId& v, const VertexId& w) const {
        require_vertex(v);
        require_vertex(w);
        if (v == w) throw std::domain_error("multiplicity is for distinct vertices; use loop_count");
        long m = 0;
        for (const Edge& e : edges_)
            if ((e.a == v && e.b == w) || (e.a == w && e.b == v)) ++m;
        return m;
    }

    long multiplicity(const VertexId& v, const VertexId& w, int color) const {
        require_vertex(v);
        require_vertex(w);
        if (v == w) throw std::domain_error("multiplicity is for distinct vertices; use loop_count");
        long m = 0;
        for (const Edge& e : edges_)
            if (e.color == color && ((e.a == v && e.b == w) || (e.a == w && e.b == v))) ++m;
        return m;
    }

    // Spanning subgraph holding exactly the edges of one color. Isolated
    // vertices are retained so component counts include them.
    ColoredMultigraph color_class(int j) const {
        ColoredMultigraph out(max_color_);
        out.vertices_ = vertices_;
        for (const Edge& e : edges_)
            if (e.color == j) out.edges_.push_back(e);
        return out;
    }

    struct Components {
        std::size_t count = 0;
        std::vector<std::size_t> label;  // parallel to vertices()
    };

    Components components() const {
        std::vector<std::size_t> parent(vertices_.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
            return x;
        };
        for (const Edge& e : edges_) {
            std::size_t ra = find(index_of(e.a));
            std::size_t rb = find(index_of(e.b));
            if (ra != rb) parent[ra] = rb;
        }
        Components out;
        out.label.resize(vertices_.size());
        std::vector<std::size_t> remap(vertices_.size(), SIZE_MAX);
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            std::size_t root = find(i);
            if (remap[root] == SIZE_MAX) remap[root] = out.count++;
            out.label[i] = remap[root];
        }
        return out;
    }

    // True iff every component is a path, possibly of length 0: no loops,
    // maximum degree 2, no cycles (a parallel pair already counts as one).
    bool is_path_forest() const {
        for (const Edge& e : edges_)
            if (e.is_loop()) return false;
        for (const VertexId& v : vertices_)
            if (degree(v) > 2) return false;
        Components c = components();
        // A forest has |E| = |V| - omega; any cycle breaks the equality.
        return edges_.size() == vertices_.size() - c.count;
    }

    // Connectivity of one color class restricted to the vertices it touches.
    // An empty class is trivially connected.
    bool class_connected_on_support(int j) const {
        std::vector<VertexId> support;
        for (const Edge& e : edges_) {
            if (e.color != j) continue;
            support.push_back(e.a);
            support.push_back(e.b);
        }
        if (support.empty()) return true;
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        std::vector<std::size_t> parent(support.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto idx = [&](const VertexId& v) {
            return static_cast<std::size_t>(
                std::lower_bound(support.begin(), support.end(), v) - support.begin());
        };
        auto find = [&](std::size_t x) {
            while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
            return x;
        };
        std::size_t merges = 0;
        for (const Edge& e : edges_) {
            if (e.color != j) continue;
            std::size_t ra = find(idx(e.a));
            std::size_t rb = find(idx(e.b));
            if (ra != rb) { parent[ra] = rb; ++merges; }
        }
        return merges + 1 == support.size();
    }

    std::vector<Edge> sorted_edges() const {
        std::vector<Edge> out = edges_;
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const ColoredMultigraph& x, const ColoredMultigraph& y) {
        return x.max_color_ == y.max_color_ && x.vertices_ == y.vertices_ &&
               x.sorted_edges() == y.sorted_edges();
    }

private:
    void require_vertex(const VertexId& v) const {
        if (!has_vertex(v)) throw std::domain_error("unknown vertex " + to_string(v));
    }

    std::size_t index_of(const VertexId& v) const {
        return static_cast<std::size_t>(
            std::lower_bound(vertices_.begin(), vertices_.end(), v) - vertices_.begin());
    }

    long degree_impl(const VertexId& v, int color) const {
        require_vertex(v);
        long d = 0;
        for (const Edge& e : edges_) {
            if (color >= 0 && e.color != color) continue;
            if (e.is_loop()) {
                if (e.a == v) d += 2;
            } else {
                if (e.a == v || e.b == v) d += 1;
            }
        }
        return d;
    }

    long loop_count_impl(const VertexId& v, int color) const {
        require_vertex(v);
        long n = 0;
        for (const Edge& e : edges_)
            if (e.is_loop() && e.a == v && (color < 0 || e.color == color)) ++n;
        return n;
    }

    std::vector<VertexId> vertices_;  // sorted, unique
    std::vector<Edge> edges_;
    int max_color_ = 0;
};

}  // namespace hamembed
