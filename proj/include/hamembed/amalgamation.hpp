#pragma once

// Intermediate graphs of the embedding construction. Starting from a valid
// coloring of K(a^(p); lambda, mu):
//
//   build_g1            adds the hub vertex u with mu*a^2*C(r,2) loops and
//                       mu*a*r parallel edges to every original vertex.
//   extend_coloring_a   colors the new edges so every original vertex ends
//                       at per-color degree exactly 2, then colors loops so
//                       the hub's per-color degree is an even multiple of r;
//                       surplus loops take the reserved extra color.
//   (detach u -> u_1..u_r via eta_detach)
//   reabsorb_extra_color recolors the 2-factors of the extra class onto
//                       ordinary colors without pushing any hub-part degree
//                       above 2a.
//   build_g3            adds lambda*C(a,2) loops per hub part, colored to
//                       bring every per-color degree there to exactly 2a.
//   (detach each u_i into a copies -> the target graph)
//
// The boundary variant (lambda == mu*a*(p+r-1)) colors r - omega_j loops
// with color j instead, which exhausts the loops exactly, so no extra color
// is ever introduced.

#include <stdexcept>
#include <string>
#include <vector>

#include "hamembed/conditions.hpp"
#include "hamembed/detachment.hpp"
#include "hamembed/gdd.hpp"
#include "hamembed/multigraph.hpp"

namespace hamembed {

enum class AmalgamationStage { g1, g2, g3 };

struct AmalgamationState {
    ColoredMultigraph graph;
    AmalgamationStage stage = AmalgamationStage::g1;
    GddParams params;
    bool boundary_variant = false;
    VertexId hub;                      // u while at stage g1
    std::vector<VertexId> hub_parts;   // u_1..u_r at stages g2/g3
    std::vector<long> b;               // d_{G1(j)}(u) = b_j * r, colors 1..k (+ extra last)
    std::vector<long> b_prime;         // post-reabsorb per-color hub-part degrees
    int extra_color = 0;               // reserved color k+1, or 0 when unused
};

inline VertexId hub_vertex() { return VertexId{0, 0, VertexTier::added}; }

inline AmalgamationState build_g1(const ColoredMultigraph& g, const GddParams& params) {
    params.validate();
    if (!conforms_to_gdd(g, params, params.p))
        throw std::domain_error("build_g1: input does not conform to K(a^(p); lambda, mu)");
    AmalgamationState st;
    st.params = params;
    st.stage = AmalgamationStage::g1;
    st.hub = hub_vertex();
    st.graph = g;
    st.graph.add_vertex(st.hub);
    long loops = params.mu * params.a * params.a *
                 (static_cast<long>(params.r) * (params.r - 1) / 2);
    for (long t = 0; t < loops; ++t)
        st.graph.add_edge(st.hub, st.hub, ColoredMultigraph::uncolored);
    for (const VertexId& v : g.vertices())
        for (long t = 0; t < params.mu * params.a * params.r; ++t)
            st.graph.add_edge(st.hub, v, ColoredMultigraph::uncolored);
    return st;
}

namespace amal_detail {

inline void fail(const std::string& what) {
    throw std::runtime_error("amalgamation: " + what);
}

}  // namespace amal_detail

// Rules A1-A3 (A1 is implicit: existing colors are never touched). The
// caller must have verified the embedding conditions; violations surface
// here as construction errors naming the offending quantity.
inline AmalgamationState extend_coloring_a(AmalgamationState st,
                                           const std::vector<ClassStats>& stats,
                                           bool boundary_variant) {
    if (st.stage != AmalgamationStage::g1) amal_detail::fail("extend_coloring_a expects stage G1");
    const GddParams& params = st.params;
    long k = params.k();
    if (static_cast<long>(stats.size()) != k) amal_detail::fail("stats do not cover colors 1..k");
    st.boundary_variant = boundary_variant;

    ColoredMultigraph& g1 = st.graph;
    int extra = boundary_variant ? 0 : static_cast<int>(k) + 1;
    g1.set_max_color(boundary_variant ? static_cast<int>(k) : static_cast<int>(k) + 1);
    st.extra_color = extra;

    // A2: bring every original vertex to per-color degree 2 using its
    // uncolored hub edges, consumed in canonical order.
    for (const VertexId& v : g1.vertices()) {
        if (v == st.hub) continue;
        std::vector<std::size_t> spare;
        for (std::size_t i = 0; i < g1.edges().size(); ++i) {
            const Edge& e = g1.edges()[i];
            if (e.color == ColoredMultigraph::uncolored && !e.is_loop() && e.touches(st.hub) &&
                e.touches(v))
                spare.push_back(i);
        }
        std::size_t next = 0;
        for (int j = 1; j <= static_cast<int>(k); ++j) {
            long need = 2 - g1.degree(v, j);
            if (need < 0)
                amal_detail::fail("vertex " + to_string(v) + " exceeds degree 2 in color " +
                                  std::to_string(j));
            for (long t = 0; t < need; ++t) {
                if (next >= spare.size())
                    amal_detail::fail("ran out of hub edges at " + to_string(v));
                g1.set_edge_color(spare[next++], j);
            }
        }
        if (next != spare.size())
            amal_detail::fail("hub edges left uncolored at " + to_string(v) +
                              "; coloring does not meet the degree-2 budget");
    }

    // A3: loops at the hub. General: r - s_j of color j, remainder to the
    // extra color. Boundary: r - omega_j of color j, exhausting exactly.
    std::vector<std::size_t> loops;
    for (std::size_t i = 0; i < g1.edges().size(); ++i)
        if (g1.edges()[i].is_loop() && g1.edges()[i].a == st.hub) loops.push_back(i);
    std::size_t next = 0;
    for (const ClassStats& cs : stats) {
        long take = boundary_variant ? params.r - cs.omega : params.r - cs.s;
        if (take < 0)
            amal_detail::fail("negative loop budget for color " + std::to_string(cs.color));
        for (long t = 0; t < take; ++t) {
            if (next >= loops.size())
                amal_detail::fail("loop budget exceeded; sum condition must hold");
            g1.set_edge_color(loops[next++], cs.color);
        }
    }
    for (; next < loops.size(); ++next) {
        if (boundary_variant)
            amal_detail::fail("boundary coloring must exhaust the hub loops exactly");
        g1.set_edge_color(loops[next], extra);
    }

    // Record b_j and verify the degree identities this stage guarantees.
    st.b.clear();
    int top = boundary_variant ? static_cast<int>(k) : static_cast<int>(k) + 1;
    for (int j = 1; j <= top; ++j) {
        long d = g1.degree(st.hub, j);
        if (d % params.r != 0) amal_detail::fail("hub degree not a multiple of r in color " + std::to_string(j));
        long bj = d / params.r;
        if (bj % 2 != 0) amal_detail::fail("b_j odd in color " + std::to_string(j));
        if (j <= k && bj / 2 > params.a) amal_detail::fail("b_j/2 exceeds a in color " + std::to_string(j));
        st.b.push_back(bj);
    }
    for (int j = 1; j <= static_cast<int>(k); ++j)
        if (!g1.class_connected_on_support(j))
            amal_detail::fail("color class " + std::to_string(j) + " of G1 is not connected");
    return st;
}

// Recolor the 2-factors of the extra class onto colors 1..k, keeping every
// hub-part degree at most 2a. Target color: lowest index with room.
inline AmalgamationState reabsorb_extra_color(AmalgamationState st) {
    if (st.stage != AmalgamationStage::g2)
        amal_detail::fail("reabsorb_extra_color expects stage G2");
    const GddParams& params = st.params;
    long k = params.k();
    ColoredMultigraph& g2 = st.graph;

    if (st.extra_color != 0) {
        std::vector<std::size_t> extra_edges;
        for (std::size_t i = 0; i < g2.edges().size(); ++i)
            if (g2.edges()[i].color == st.extra_color) extra_edges.push_back(i);
        if (!extra_edges.empty()) {
            ColoredMultigraph cls(st.extra_color);
            for (const VertexId& u : st.hub_parts) cls.add_vertex(u);
            for (std::size_t i : extra_edges) {
                const Edge& e = g2.edges()[i];
                cls.add_edge(e.a, e.b, e.color);
            }
            TwoFactorization tf = two_factorize(cls);
            for (const auto& factor : tf.factors) {
                int target = 0;
                for (int j = 1; j <= static_cast<int>(k); ++j) {
                    bool room = true;
                    for (const VertexId& u : st.hub_parts)
                        if (g2.degree(u, j) > 2 * params.a - 2) room = false;
                    if (room) { target = j; break; }
                }
                if (target == 0)
                    amal_detail::fail("no color has room for a 2-factor of the extra class");
                for (std::size_t fi : factor) g2.set_edge_color(extra_edges[fi], target);
            }
        }
        st.extra_color = 0;
        g2.set_max_color(static_cast<int>(k));
    }

    st.b_prime.clear();
    for (int j = 1; j <= static_cast<int>(k); ++j) {
        long d = g2.degree(st.hub_parts.front(), j);
        for (const VertexId& u : st.hub_parts)
            if (g2.degree(u, j) != d)
                amal_detail::fail("hub parts disagree on the degree of color " + std::to_string(j));
        if (d % 2 != 0 || d > 2 * params.a)
            amal_detail::fail("b'_j out of range in color " + std::to_string(j));
        st.b_prime.push_back(d);
    }
    return st;
}

// Add lambda*C(a,2) loops on every hub part, colored so every per-color
// degree there lands on exactly 2a (rule B2; old colors stay, rule B1).
inline AmalgamationState build_g3(AmalgamationState st) {
    if (st.stage != AmalgamationStage::g2) amal_detail::fail("build_g3 expects stage G2");
    if (st.extra_color != 0) amal_detail::fail("build_g3 requires the extra class to be empty");
    const GddParams& params = st.params;
    long k = params.k();
    long loop_budget = params.lambda * (static_cast<long>(params.a) * (params.a - 1) / 2);

    long per_part = 0;
    for (int j = 1; j <= static_cast<int>(k); ++j)
        per_part += params.a - st.b_prime[static_cast<std::size_t>(j - 1)] / 2;
    if (per_part != loop_budget)
        amal_detail::fail("loop budget mismatch: sum_j (a - b'_j/2) = " + std::to_string(per_part) +
                          " but lambda*C(a,2) = " + std::to_string(loop_budget));

    ColoredMultigraph& g = st.graph;
    for (const VertexId& u : st.hub_parts) {
        for (int j = 1; j <= static_cast<int>(k); ++j) {
            long add = params.a - st.b_prime[static_cast<std::size_t>(j - 1)] / 2;
            for (long t = 0; t < add; ++t) g.add_edge(u, u, j);
        }
    }
    for (const VertexId& u : st.hub_parts)
        for (int j = 1; j <= static_cast<int>(k); ++j)
            if (g.degree(u, j) != 2 * params.a)
                amal_detail::fail("hub part " + to_string(u) + " missed degree 2a in color " +
                                  std::to_string(j));
    for (int j = 1; j <= static_cast<int>(k); ++j)
        if (!g.class_connected_on_support(j))
            amal_detail::fail("color class " + std::to_string(j) + " of G3 is not connected");
    st.stage = AmalgamationStage::g3;
    return st;
}

}  // namespace hamembed
