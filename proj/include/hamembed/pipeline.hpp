#pragma once

// Full embedding pipeline: decide embeddability of a colored
// K(a^(p); lambda, mu) into a Hamiltonian decomposition of
// K(a^(p+r); lambda, mu) and construct the decomposition when a
// sufficiency regime applies.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamembed/amalgamation.hpp"
#include "hamembed/conditions.hpp"
#include "hamembed/detachment.hpp"
#include "hamembed/gdd.hpp"
#include "hamembed/multigraph.hpp"

namespace hamembed {

struct EmbedReport {
    Verdict verdict;
    RegimeTag regime = RegimeTag::Undetermined;
    std::optional<ColoredMultigraph> result;
    std::vector<std::string> trace;
};

// Checks run on a finished embedding:
//   (1) the result is K(a^(p+r); lambda, mu),
//   (2) colors 1..k partition its edges,
//   (3) every color class is one cycle through all (p+r)a vertices,
//   (4) restricted to the original p parts the coloring equals the input.
inline std::vector<std::string> verify_embedding(const ColoredMultigraph& g,
                                                 const ColoredMultigraph& result,
                                                 const GddParams& params) {
    std::vector<std::string> fail;
    int parts = params.p + params.r;
    if (!conforms_to_gdd(result, params, parts))
        fail.push_back("result is not K(a^(p+r); lambda, mu)");
    long k = params.k_integral() ? params.k() : -1;
    if (result.max_color() != k) fail.push_back("result color count differs from k");
    for (const Edge& e : result.edges())
        if (e.color < 1 || e.color > result.max_color()) {
            fail.push_back("result contains an uncolored or out-of-range edge");
            break;
        }
    std::size_t n = static_cast<std::size_t>(parts) * static_cast<std::size_t>(params.a);
    for (int j = 1; j <= result.max_color(); ++j) {
        ColoredMultigraph cls = result.color_class(j);
        bool ham = cls.components().count == 1 && cls.vertices().size() == n;
        if (ham)
            for (const VertexId& v : cls.vertices())
                if (cls.degree(v) != 2) ham = false;
        if (!ham) fail.push_back("color class " + std::to_string(j) + " is not a Hamiltonian cycle");
    }
    std::vector<Edge> restricted;
    for (const Edge& e : result.edges())
        if (e.a.part <= params.p && e.b.part <= params.p) restricted.push_back(e);
    std::sort(restricted.begin(), restricted.end());
    if (restricted != g.sorted_edges())
        fail.push_back("restriction to the original parts differs from the input coloring");
    return fail;
}

namespace pipeline_detail {

inline VertexId hub_part_id(const GddParams& params, int i) {
    return VertexId{params.p + i, 0, VertexTier::added};
}

inline std::string stage_line(const std::string& stage, const ColoredMultigraph& g) {
    return stage + ": " + std::to_string(g.vertices().size()) + " vertices, " +
           std::to_string(g.edge_count()) + " edges";
}

}  // namespace pipeline_detail

inline EmbedReport embed(const ColoredMultigraph& g, const GddParams& params,
                         std::uint64_t seed = 0) {
    params.validate();
    if (!conforms_to_gdd(g, params, params.p))
        throw std::domain_error("embed: input does not conform to K(a^(p); lambda, mu)");

    EmbedReport report;
    bool boundary = params.is_boundary();
    report.regime = classify_regime(params).tag;

    report.verdict = boundary ? check_boundary_conditions(g, params)
                              : check_main_conditions(g, params);
    if (!report.verdict.passed()) {
        report.verdict.embeddable = Verdict::Answer::no;
        return report;
    }
    if (!boundary && !check_sum_condition(report.verdict.stats, params)) {
        // The open regime: necessary conditions hold but no sufficiency
        // argument applies.
        report.regime = RegimeTag::Undetermined;
        report.verdict.embeddable = Verdict::Answer::undetermined;
        report.trace.push_back("eq2: sum condition fails; embeddability undetermined");
        return report;
    }

    // Construction. Every stage revalidates its own invariants; a failure
    // past this point is a defect, not a property of the input.
    AmalgamationState st = build_g1(g, params);
    report.trace.push_back(pipeline_detail::stage_line("G1", st.graph));
    st = extend_coloring_a(std::move(st), report.verdict.stats, boundary);

    DetachmentPlan hub_plan;
    hub_plan.eta[st.hub] = params.r;
    DetachmentResult d2;
    if (params.r == 1) {
        // eta = 1 everywhere: the detachment is the identity; only the hub
        // gets its final name.
        d2.graph = st.graph;
        VertexId u1 = pipeline_detail::hub_part_id(params, 1);
        d2.graph.rename_vertex(st.hub, u1);
        d2.copies[st.hub] = {u1};
        d2.used_fallback = false;
    } else {
        CopyNamer namer = [&](const VertexId&, int idx, const ColoredMultigraph&) {
            return pipeline_detail::hub_part_id(params, idx);
        };
        d2 = eta_detach(st.graph, hub_plan, seed, namer);
    }
    st.graph = d2.graph;
    st.stage = AmalgamationStage::g2;
    st.hub_parts = d2.copies.at(st.hub);
    report.trace.push_back(pipeline_detail::stage_line(
        d2.used_fallback ? "detach-r (fallback search)" : "detach-r", st.graph));

    st = reabsorb_extra_color(std::move(st));
    report.trace.push_back("reabsorb: extra class empty");
    st = build_g3(std::move(st));
    report.trace.push_back(pipeline_detail::stage_line("G3", st.graph));

    DetachmentPlan part_plan;
    for (const VertexId& u : st.hub_parts) part_plan.eta[u] = params.a;
    CopyNamer part_namer = [&](const VertexId& origin, int idx, const ColoredMultigraph&) {
        return VertexId{origin.part, idx, VertexTier::added};
    };
    DetachmentResult d4 = eta_detach(st.graph, part_plan, seed + 1, part_namer);
    report.trace.push_back(pipeline_detail::stage_line(
        d4.used_fallback ? "detach-a (fallback search)" : "detach-a", d4.graph));

    std::vector<std::string> bad = verify_embedding(g, d4.graph, params);
    if (!bad.empty()) {
        std::string msg = "embed: constructed decomposition failed verification:";
        for (const std::string& s : bad) msg += "\n  " + s;
        throw std::runtime_error(msg);
    }
    report.result = d4.graph;
    report.verdict.embeddable = Verdict::Answer::yes;
    return report;
}

}  // namespace hamembed
