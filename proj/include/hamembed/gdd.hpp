#pragma once

// The family K(a^(p); lambda, mu): p parts of size a, every same-part pair
// joined by lambda parallel edges, every cross-part pair by mu.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hamembed/multigraph.hpp"

namespace hamembed {

struct GddParams {
    int a = 2;        // part size, > 1
    int p = 1;        // part count, >= 1
    long lambda = 0;  // within-part multiplicity
    long mu = 1;      // cross-part multiplicity
    int r = 1;        // number of parts added by the embedding

    void validate() const {
        if (a <= 1) throw std::domain_error("part size a must be > 1");
        if (p < 1) throw std::domain_error("part count p must be >= 1");
        if (lambda < 0) throw std::domain_error("lambda must be >= 0");
        if (mu < 1) throw std::domain_error("mu must be >= 1");
        if (r < 1) throw std::domain_error("embedding radius r must be >= 1");
        if (lambda == mu)
            throw std::domain_error("lambda-equals-mu: the embedding theory excludes lambda == mu");
    }

    // Twice the target number of colors: lambda(a-1) + mu*a*(p+r-1).
    long k2() const { return lambda * (a - 1) + mu * a * (p + r - 1); }
    bool k_integral() const { return k2() % 2 == 0; }
    long k() const {
        if (!k_integral()) throw std::domain_error("color count is not integral for these parameters");
        return k2() / 2;
    }

    // Pure multiplicity pinned to its ceiling: lambda == mu*a*(p+r-1).
    bool is_boundary() const { return lambda == mu * a * (p + r - 1); }
};

enum class EdgeKind { pure, mixed };

inline EdgeKind classify_edge(const VertexId& v, const VertexId& w) {
    if (v == w) throw std::domain_error("a loop is neither pure nor mixed");
    return v.part == w.part ? EdgeKind::pure : EdgeKind::mixed;
}

// K(a^(parts); lambda, mu) on parts 1..parts with slots 1..a, all edges
// uncolored.
inline ColoredMultigraph build_gdd(const GddParams& params, int parts) {
    params.validate();
    if (parts < 1) throw std::domain_error("parts must be >= 1");
    ColoredMultigraph g(0);
    for (int part = 1; part <= parts; ++part)
        for (int slot = 1; slot <= params.a; ++slot)
            g.add_vertex(VertexId{part, slot, VertexTier::original});
    const auto& vs = g.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            long m = vs[i].part == vs[j].part ? params.lambda : params.mu;
            for (long t = 0; t < m; ++t) g.add_edge(vs[i], vs[j], ColoredMultigraph::uncolored);
        }
    }
    return g;
}

// True iff g is exactly K(a^(parts); lambda, mu) up to edge colors: loopless,
// part indices 1..parts with a vertices each (any tier), and every pair
// multiplicity matching lambda/mu.
inline bool conforms_to_gdd(const ColoredMultigraph& g, const GddParams& params, int parts) {
    if (parts < 1) return false;
    std::map<int, int> part_sizes;
    for (const VertexId& v : g.vertices()) ++part_sizes[v.part];
    if (static_cast<int>(part_sizes.size()) != parts) return false;
    for (int part = 1; part <= parts; ++part) {
        auto it = part_sizes.find(part);
        if (it == part_sizes.end() || it->second != params.a) return false;
    }
    std::map<std::pair<VertexId, VertexId>, long> mult;
    for (const Edge& e : g.edges()) {
        if (e.is_loop()) return false;
        ++mult[{e.a, e.b}];
    }
    const auto& vs = g.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            long want = vs[i].part == vs[j].part ? params.lambda : params.mu;
            auto it = mult.find({vs[i], vs[j]});
            long have = it == mult.end() ? 0 : it->second;
            if (have != want) return false;
        }
    }
    return true;
}

}  // namespace hamembed
