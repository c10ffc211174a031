#pragma once

// Instance and result files. An instance is JSON:
//
//   {
//     "params": {"a": 2, "p": 2, "lambda": 0, "mu": 1, "r": 1},
//     "edges": [{"from": "p1.v1", "to": "p2.v1", "color": 1}, ...]
//   }
//
// Vertices are implicit from the parameters and named "p<part>.v<slot>".
// Serialization is canonical: edges sorted by (from, to, color) with
// from <= to, keys emitted in sorted order, two-space indentation. Parsing
// a canonical file and serializing it again is byte-identical.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamembed/conditions.hpp"
#include "hamembed/gdd.hpp"
#include "hamembed/multigraph.hpp"
#include "hamembed/pipeline.hpp"

namespace hamembed {

enum class ParseCode {
    schema_violation,
    unknown_vertex,
    color_out_of_range,
    multiplicity_mismatch,
    lambda_equals_mu,
    invalid_params,
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ParseCode code() const { return code_; }

private:
    ParseCode code_;
};

inline std::string parse_code_name(ParseCode c) {
    switch (c) {
        case ParseCode::schema_violation: return "schema-violation";
        case ParseCode::unknown_vertex: return "unknown-vertex";
        case ParseCode::color_out_of_range: return "color-out-of-range";
        case ParseCode::multiplicity_mismatch: return "multiplicity-mismatch";
        case ParseCode::lambda_equals_mu: return "lambda-equals-mu";
        case ParseCode::invalid_params: return "invalid-params";
    }
    return "unknown";
}

struct Instance {
    GddParams params;
    ColoredMultigraph graph;
};

namespace io_detail {

inline std::string vertex_name(const VertexId& v) {
    return "p" + std::to_string(v.part) + ".v" + std::to_string(v.slot);
}

// "p<i>.v<j>" -> (part, slot); tier is original inside the first p parts
// and added beyond them.
inline VertexId parse_vertex_name(const std::string& name, int max_part, int a) {
    auto fail = [&]() -> VertexId {
        throw ParseError(ParseCode::unknown_vertex, "unknown vertex name '" + name + "'");
    };
    if (name.size() < 4 || name[0] != 'p') return fail();
    std::size_t dot = name.find(".v");
    if (dot == std::string::npos) return fail();
    int part = 0, slot = 0;
    try {
        std::size_t used = 0;
        part = std::stoi(name.substr(1, dot - 1), &used);
        if (used != dot - 1) return fail();
        slot = std::stoi(name.substr(dot + 2), &used);
        if (used != name.size() - dot - 2) return fail();
    } catch (const std::exception&) {
        return fail();
    }
    if (part < 1 || part > max_part || slot < 1 || slot > a) return fail();
    VertexTier tier = VertexTier::original;
    return VertexId{part, slot, tier};
}

inline long require_int(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ParseError(ParseCode::schema_violation,
                         std::string("missing or non-integer field '") + key + "'");
    return j[key].get<long>();
}

inline GddParams parse_params(const nlohmann::json& j) {
    if (!j.is_object())
        throw ParseError(ParseCode::schema_violation, "'params' must be an object");
    GddParams params;
    params.a = static_cast<int>(require_int(j, "a"));
    params.p = static_cast<int>(require_int(j, "p"));
    params.lambda = require_int(j, "lambda");
    params.mu = require_int(j, "mu");
    params.r = static_cast<int>(require_int(j, "r"));
    try {
        params.validate();
    } catch (const std::domain_error& e) {
        if (params.lambda == params.mu && params.a > 1 && params.p >= 1 && params.mu >= 1 &&
            params.r >= 1)
            throw ParseError(ParseCode::lambda_equals_mu, e.what());
        throw ParseError(ParseCode::invalid_params, e.what());
    }
    return params;
}

inline nlohmann::json params_json(const GddParams& params) {
    nlohmann::json j;
    j["a"] = params.a;
    j["p"] = params.p;
    j["lambda"] = params.lambda;
    j["mu"] = params.mu;
    j["r"] = params.r;
    return j;
}

inline nlohmann::json edges_json(const ColoredMultigraph& g) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Edge& e : g.sorted_edges()) {
        nlohmann::json rec;
        rec["from"] = vertex_name(e.a);
        rec["to"] = vertex_name(e.b);
        rec["color"] = e.color;
        arr.push_back(rec);
    }
    return arr;
}

}  // namespace io_detail

inline Instance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(ParseCode::schema_violation, std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("params") || !j.contains("edges") ||
        !j["edges"].is_array())
        throw ParseError(ParseCode::schema_violation,
                         "instance requires 'params' object and 'edges' array");

    Instance inst;
    inst.params = io_detail::parse_params(j["params"]);
    bool k_known = inst.params.k_integral();
    long k = k_known ? inst.params.k() : 0;

    int max_seen = 0;
    struct Rec { VertexId from, to; int color; };
    std::vector<Rec> recs;
    for (const nlohmann::json& e : j["edges"]) {
        if (!e.is_object() || !e.contains("from") || !e.contains("to") ||
            !e["from"].is_string() || !e["to"].is_string())
            throw ParseError(ParseCode::schema_violation, "edge records need 'from' and 'to'");
        VertexId from = io_detail::parse_vertex_name(e["from"].get<std::string>(), inst.params.p,
                                                     inst.params.a);
        VertexId to = io_detail::parse_vertex_name(e["to"].get<std::string>(), inst.params.p,
                                                   inst.params.a);
        if (from == to)
            throw ParseError(ParseCode::schema_violation, "loop edges are not part of the family");
        long color = io_detail::require_int(e, "color");
        if (color < 1 || (k_known && color > k))
            throw ParseError(ParseCode::color_out_of_range,
                             "edge color " + std::to_string(color) + " outside 1..k");
        max_seen = std::max(max_seen, static_cast<int>(color));
        recs.push_back({from, to, static_cast<int>(color)});
    }

    inst.graph = ColoredMultigraph(k_known ? static_cast<int>(k) : max_seen);
    for (int part = 1; part <= inst.params.p; ++part)
        for (int slot = 1; slot <= inst.params.a; ++slot)
            inst.graph.add_vertex(VertexId{part, slot, VertexTier::original});
    for (const Rec& rec : recs) inst.graph.add_edge(rec.from, rec.to, rec.color);

    if (!conforms_to_gdd(inst.graph, inst.params, inst.params.p))
        throw ParseError(ParseCode::multiplicity_mismatch,
                         "edge multiplicities do not match lambda/mu");
    return inst;
}

inline std::string serialize_instance(const GddParams& params, const ColoredMultigraph& g) {
    nlohmann::json j;
    j["params"] = io_detail::params_json(params);
    j["edges"] = io_detail::edges_json(g);
    return j.dump(2) + "\n";
}

// Canonical vertex order of one Hamiltonian color class: start at the least
// vertex, first step toward its least class neighbor.
inline std::vector<VertexId> cycle_order(const ColoredMultigraph& g, int color) {
    std::vector<VertexId> order;
    ColoredMultigraph cls = g.color_class(color);
    if (cls.edge_count() == 0) return order;
    VertexId start = cls.vertices().front();
    VertexId cur = start;
    VertexId prev = start;
    do {
        order.push_back(cur);
        std::optional<VertexId> next;
        for (const Edge& e : cls.edges()) {
            if (!e.touches(cur)) continue;
            VertexId cand = e.other(cur);
            bool back_home = cand == start && order.size() == g.vertices().size();
            if (cand != prev && (std::find(order.begin(), order.end(), cand) == order.end() || back_home))
                if (!next || cand < *next) next = cand;
        }
        if (!next) break;
        prev = cur;
        cur = *next;
    } while (cur != start);
    return order;
}

inline std::string verdict_name(Verdict::Answer a) {
    switch (a) {
        case Verdict::Answer::yes: return "yes";
        case Verdict::Answer::no: return "no";
        case Verdict::Answer::undetermined: return "undetermined";
    }
    return "unknown";
}

inline std::string serialize_result(const EmbedReport& report, const GddParams& params) {
    nlohmann::json j;
    j["verdict"] = verdict_name(report.verdict.embeddable);
    j["regime"] = regime_name(report.regime);
    if (!report.verdict.violated.empty()) j["violated"] = report.verdict.violated;
    if (!report.trace.empty()) j["trace"] = report.trace;
    if (report.result) {
        nlohmann::json res;
        res["params"] = io_detail::params_json(params);
        res["parts"] = params.p + params.r;
        res["edges"] = io_detail::edges_json(*report.result);
        nlohmann::json cycles = nlohmann::json::array();
        for (int c = 1; c <= report.result->max_color(); ++c) {
            nlohmann::json cyc;
            cyc["color"] = c;
            nlohmann::json verts = nlohmann::json::array();
            for (const VertexId& v : cycle_order(*report.result, c))
                verts.push_back(io_detail::vertex_name(v));
            cyc["vertices"] = verts;
            cycles.push_back(cyc);
        }
        res["cycles"] = cycles;
        j["result"] = res;
    }
    return j.dump(2) + "\n";
}

// Graph held in a result file: edges over parts 1..parts with parts beyond
// p carrying the added tier.
inline ColoredMultigraph parse_result_graph(const std::string& text, const GddParams& params) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(ParseCode::schema_violation, std::string("not valid JSON: ") + e.what());
    }
    if (!j.contains("result") || !j["result"].is_object() || !j["result"].contains("edges"))
        throw ParseError(ParseCode::schema_violation, "file carries no embedded result");
    const nlohmann::json& res = j["result"];
    int parts = params.p + params.r;
    long k = params.k_integral() ? params.k() : 0;

    ColoredMultigraph g(static_cast<int>(k));
    for (int part = 1; part <= parts; ++part)
        for (int slot = 1; slot <= params.a; ++slot)
            g.add_vertex(VertexId{part, slot,
                                  part <= params.p ? VertexTier::original : VertexTier::added});
    for (const nlohmann::json& e : res["edges"]) {
        VertexId from = io_detail::parse_vertex_name(e["from"].get<std::string>(), parts, params.a);
        VertexId to = io_detail::parse_vertex_name(e["to"].get<std::string>(), parts, params.a);
        if (from.part > params.p) from.tier = VertexTier::added;
        if (to.part > params.p) to.tier = VertexTier::added;
        long color = io_detail::require_int(e, "color");
        if (color < 1 || color > k)
            throw ParseError(ParseCode::color_out_of_range, "result color outside 1..k");
        g.add_edge(from, to, static_cast<int>(color));
    }
    return g;
}

}  // namespace hamembed
