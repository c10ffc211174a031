#pragma once

// Embeddability conditions and parameter-regime classification for colorings
// of K(a^(p); lambda, mu).
//
// Condition identifiers are stable strings so that tests and CLI output can
// assert exact failure causes:
//   thm1.2.i .. thm1.2.iv   general conditions
//   eq2                     the sum condition (diagnostic, never a "no")
//   thm3.5.i .. thm3.5.iv   boundary conditions (lambda == mu*a*(p+r-1))

#include <string>
#include <vector>

#include "hamembed/gdd.hpp"
#include "hamembed/multigraph.hpp"

namespace hamembed {

// Per-color diagnostics: component count, its residue s in [1, r], and the
// pure/mixed edge split.
struct ClassStats {
    int color = 0;
    long omega = 0;
    int s = 0;
    long mixed_edges = 0;
    std::vector<long> pure_per_part;  // index part-1
};

inline std::vector<ClassStats> class_stats_all(const ColoredMultigraph& g,
                                               const GddParams& params) {
    std::vector<ClassStats> all;
    for (int j = 1; j <= g.max_color(); ++j) {
        ClassStats st;
        st.color = j;
        st.omega = static_cast<long>(g.color_class(j).components().count);
        st.s = static_cast<int>((st.omega - 1) % params.r) + 1;
        st.pure_per_part.assign(static_cast<std::size_t>(params.p), 0);
        for (const Edge& e : g.edges()) {
            if (e.color != j || e.is_loop()) continue;
            if (classify_edge(e.a, e.b) == EdgeKind::mixed) ++st.mixed_edges;
            else ++st.pure_per_part[static_cast<std::size_t>(e.a.part - 1)];
        }
        all.push_back(std::move(st));
    }
    return all;
}

struct Verdict {
    enum class Answer { yes, no, undetermined };
    Answer embeddable = Answer::undetermined;
    std::vector<std::string> violated;
    std::vector<std::string> details;  // human-readable, parallel to violated
    std::vector<ClassStats> stats;

    bool passed() const { return violated.empty(); }
};

namespace detail {
inline void record(Verdict& v, const std::string& id, const std::string& why) {
    for (const std::string& seen : v.violated)
        if (seen == id) return;
    v.violated.push_back(id);
    v.details.push_back(why);
}
}  // namespace detail

// Conditions for the general embedding: (i) the color count matches
// (lambda(a-1)+mu*a*(p+r-1))/2, (ii) lambda <= mu*a*(p+r-1), (iii) every
// color class is a path forest, (iv) omega_j <= a*r.
inline Verdict check_main_conditions(const ColoredMultigraph& g, const GddParams& params) {
    params.validate();
    if (!conforms_to_gdd(g, params, params.p))
        throw std::domain_error("graph does not conform to K(a^(p); lambda, mu)");
    Verdict v;
    v.stats = class_stats_all(g, params);
    if (!params.k_integral() || g.max_color() != params.k())
        detail::record(v, "thm1.2.i",
                       "declared color count " + std::to_string(g.max_color()) +
                           " != (lambda(a-1)+mu a(p+r-1))/2 = " + std::to_string(params.k2()) + "/2");
    if (params.lambda > params.mu * params.a * (params.p + params.r - 1))
        detail::record(v, "thm1.2.ii", "lambda exceeds mu*a*(p+r-1)");
    for (int j = 1; j <= g.max_color(); ++j)
        if (!g.color_class(j).is_path_forest())
            detail::record(v, "thm1.2.iii",
                           "color class " + std::to_string(j) + " is not a path forest");
    long cap = static_cast<long>(params.a) * params.r;
    for (const ClassStats& st : v.stats)
        if (st.omega > cap)
            detail::record(v, "thm1.2.iv",
                           "omega_" + std::to_string(st.color) + " = " + std::to_string(st.omega) +
                               " > a*r = " + std::to_string(cap));
    for (const Edge& e : g.edges())
        if (e.color < 1 || e.color > g.max_color())
            detail::record(v, "thm1.2.i", "edge with color outside 1..k");
    v.embeddable = v.passed() ? Verdict::Answer::yes : Verdict::Answer::no;
    return v;
}

// Sum condition: sum_j s_j >= k*r - mu*a^2*C(r,2).
inline bool check_sum_condition(const std::vector<ClassStats>& stats, const GddParams& params) {
    long lhs = 0;
    for (const ClassStats& st : stats) lhs += st.s;
    long k = static_cast<long>(stats.size());
    long rhs = k * params.r -
               params.mu * params.a * params.a * (static_cast<long>(params.r) * (params.r - 1) / 2);
    return lhs >= rhs;
}

// Conditions for the boundary case lambda == mu*a*(p+r-1): (i) the color
// count matches mu*a^2*(p+r-1)/2, (ii) path-forest classes, (iii) exactly
// a-1 pure edges from each part and at most p-1 mixed edges per class,
// (iv) omega_j <= r.
inline Verdict check_boundary_conditions(const ColoredMultigraph& g, const GddParams& params) {
    params.validate();
    if (!params.is_boundary())
        throw std::domain_error("boundary conditions require lambda == mu*a*(p+r-1)");
    if (!conforms_to_gdd(g, params, params.p))
        throw std::domain_error("graph does not conform to K(a^(p); lambda, mu)");
    Verdict v;
    v.stats = class_stats_all(g, params);
    long k2 = params.mu * params.a * params.a * (params.p + params.r - 1);
    if (k2 % 2 != 0 || g.max_color() != k2 / 2)
        detail::record(v, "thm3.5.i",
                       "declared color count " + std::to_string(g.max_color()) +
                           " != mu a^2 (p+r-1)/2 = " + std::to_string(k2) + "/2");
    for (int j = 1; j <= g.max_color(); ++j)
        if (!g.color_class(j).is_path_forest())
            detail::record(v, "thm3.5.ii",
                           "color class " + std::to_string(j) + " is not a path forest");
    for (const ClassStats& st : v.stats) {
        for (std::size_t part = 0; part < st.pure_per_part.size(); ++part)
            if (st.pure_per_part[part] != params.a - 1)
                detail::record(v, "thm3.5.iii",
                               "class " + std::to_string(st.color) + " has " +
                                   std::to_string(st.pure_per_part[part]) + " pure edges in part " +
                                   std::to_string(part + 1) + ", expected a-1 = " +
                                   std::to_string(params.a - 1));
        if (st.mixed_edges > params.p - 1)
            detail::record(v, "thm3.5.iii",
                           "class " + std::to_string(st.color) + " has " +
                               std::to_string(st.mixed_edges) + " mixed edges > p-1");
        if (st.omega > params.r)
            detail::record(v, "thm3.5.iv",
                           "omega_" + std::to_string(st.color) + " = " + std::to_string(st.omega) +
                               " > r = " + std::to_string(params.r));
    }
    for (const Edge& e : g.edges())
        if (e.color < 1 || e.color > g.max_color())
            detail::record(v, "thm3.5.i", "edge with color outside 1..k");
    v.embeddable = v.passed() ? Verdict::Answer::yes : Verdict::Answer::no;
    return v;
}

enum class RegimeTag { SumCondition, LargeR, UnitR, SmallParams, Boundary, Undetermined };

struct Regime {
    RegimeTag tag = RegimeTag::Undetermined;
    // True when embeddability still needs the instance-level sum condition.
    bool needs_instance = false;
};

inline std::string regime_name(RegimeTag t) {
    switch (t) {
        case RegimeTag::SumCondition: return "sum-condition";
        case RegimeTag::LargeR: return "large-r";
        case RegimeTag::UnitR: return "unit-r";
        case RegimeTag::SmallParams: return "small-params";
        case RegimeTag::Boundary: return "boundary";
        case RegimeTag::Undetermined: return "undetermined";
    }
    return "unknown";
}

// Parameter-only classification. Boundary parameters take precedence (the
// sum condition may fail there, and the boundary conditions are exactly
// necessary and sufficient); the small-parameter regime is r-independent,
// so it outranks the r-specific tags. The sum-condition tag means "the
// remaining sufficiency test needs an instance".
inline Regime classify_regime(const GddParams& params) {
    params.validate();
    if (params.is_boundary()) return {RegimeTag::Boundary, false};
    if (params.lambda <= params.mu * params.a && params.p <= params.a)
        return {RegimeTag::SmallParams, false};
    if (params.r == 1) return {RegimeTag::UnitR, false};
    // r >= (lambda(a-1) + mu a(p-1)) / (mu a(a-1)), kept in integers.
    long lhs = static_cast<long>(params.r) * params.mu * params.a * (params.a - 1);
    long rhs = params.lambda * (params.a - 1) + params.mu * params.a * (params.p - 1);
    if (lhs >= rhs) return {RegimeTag::LargeR, false};
    return {RegimeTag::SumCondition, true};
}

}  // namespace hamembed
