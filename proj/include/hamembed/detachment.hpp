#pragma once

// Detachment engine. Given an edge-colored multigraph whose color classes
// are connected (on their supports) wherever a split touches them, and a
// split function eta satisfying
//   (i)   eta(v) = 1 implies v has no loops,
//   (ii)  d_j(v) / eta(v) is an even integer for every color j (binding
//         where eta(v) >= 2),
//   (iii) C(eta(v), 2) divides the loop count at v,
//   (iv)  eta(v) * eta(w) divides m(v, w) for every pair,
// eta_detach produces a loopless detachment in which every vertex v is
// replaced by eta(v) copies, with
//   (a) m(v_i, v_i')  = loops(v) / C(eta(v), 2),
//   (b) m(v_i, w_i')  = m(v, w) / (eta(v) eta(w)),
//   (c) d_j(v_i)      = d_j(v) / eta(v),
// and every color class of the output still connected.
//
// The engine peels one copy at a time. Each peel solves a small
// transportation problem (rows = colors, columns = neighbors plus a loop
// column) whose integral solutions are exactly the quota-correct end
// selections, then repairs per-class connectivity by quota-preserving cell
// swaps; when local repair stalls it falls back to exhaustive search over
// row assignments, which is viable at the instance sizes this library
// targets (the fallback is reported via DetachmentResult::used_fallback).

#include <algorithm>
#include <array>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamembed/multigraph.hpp"

namespace hamembed {

struct DetachmentPlan {
    std::map<VertexId, int> eta;

    int of(const VertexId& v) const {
        auto it = eta.find(v);
        return it == eta.end() ? 1 : it->second;
    }
};

// Checks the four hypotheses plus per-class connectivity. The divisibility
// hypotheses bind where a vertex actually splits; with eta identically 1
// the identity detachment is always admissible on a loopless graph.
// Connectivity is required of every class incident to a split vertex.
// Returns one message per violation; empty means the plan is admissible.
inline std::vector<std::string> validate_plan(const ColoredMultigraph& h,
                                              const DetachmentPlan& plan) {
    std::vector<std::string> out;
    for (const auto& [v, n] : plan.eta) {
        if (!h.has_vertex(v)) out.push_back("plan: eta references unknown vertex " + to_string(v));
        if (n < 1) out.push_back("plan: eta(" + to_string(v) + ") must be positive");
    }
    if (!out.empty()) return out;

    bool has_uncolored = false;
    for (const Edge& e : h.edges())
        if (e.color == ColoredMultigraph::uncolored) has_uncolored = true;
    std::vector<int> colors;
    if (has_uncolored) colors.push_back(0);
    for (int j = 1; j <= h.max_color(); ++j) colors.push_back(j);

    const auto& vs = h.vertices();
    for (const VertexId& v : vs) {
        int n = plan.of(v);
        long loops = h.loop_count(v);
        if (n == 1 && loops > 0)
            out.push_back("hyp.i: eta(" + to_string(v) + ") = 1 but vertex carries loops");
        if (n < 2) continue;
        for (int j : colors) {
            long d = h.degree(v, j);
            if (d % n != 0 || (d / n) % 2 != 0)
                out.push_back("hyp.ii: degree of " + to_string(v) + " in color " +
                              std::to_string(j) + " is " + std::to_string(d) +
                              ", not an even multiple of eta = " + std::to_string(n));
        }
        long pairs = static_cast<long>(n) * (n - 1) / 2;
        if (loops % pairs != 0)
            out.push_back("hyp.iii: C(eta,2) = " + std::to_string(pairs) +
                          " does not divide the " + std::to_string(loops) + " loops at " +
                          to_string(v));
    }
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            long m = h.multiplicity(vs[i], vs[j]);
            long q = static_cast<long>(plan.of(vs[i])) * plan.of(vs[j]);
            if (m % q != 0)
                out.push_back("hyp.iv: eta(" + to_string(vs[i]) + ")*eta(" + to_string(vs[j]) +
                              ") = " + std::to_string(q) + " does not divide m = " +
                              std::to_string(m));
        }
    }
    for (int j : colors) {
        bool touches_split = false;
        for (const VertexId& v : vs)
            if (plan.of(v) >= 2 && h.degree(v, j) > 0) touches_split = true;
        if (touches_split && !h.class_connected_on_support(j))
            out.push_back("connectivity: color class " + std::to_string(j) + " is not connected");
    }
    return out;
}

struct DetachmentResult {
    ColoredMultigraph graph;
    std::map<VertexId, std::vector<VertexId>> copies;
    bool used_fallback = false;
};

using CopyNamer =
    std::function<VertexId(const VertexId& origin, int copy_index, const ColoredMultigraph& graph)>;

inline VertexId default_copy_name(const VertexId& origin, int copy_index,
                                  const ColoredMultigraph& graph) {
    int max_slot = 0;
    for (const VertexId& v : graph.vertices())
        if (v.part == origin.part && v.tier == origin.tier) max_slot = std::max(max_slot, v.slot);
    return VertexId{origin.part, max_slot + copy_index, origin.tier};
}

namespace detach_detail {

// One peel: split a single copy off `v`, which currently stands for `n`
// copies. Rows are the colors present at v, columns its neighbors plus a
// loop column.
struct PeelProblem {
    VertexId v;
    int n = 0;
    std::vector<int> row_colors;
    std::vector<VertexId> neighbors;                // columns 0..neighbors-1
    std::size_t loop_col = 0;                       // == neighbors.size()
    std::vector<std::vector<long>> cap;             // [row][col]
    std::vector<long> row_target;                   // per-color ends for the copy
    std::vector<long> col_target;                   // per-neighbor ends + loop conversions
    std::vector<std::vector<std::vector<std::size_t>>> cell_edges;  // [row][col] -> edge idx
    std::vector<std::vector<int>> lobe_of;          // [row][neighbor col] -> lobe id
    std::vector<int> lobe_count;                    // per row
};

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

inline PeelProblem build_peel_problem(const ColoredMultigraph& work, const VertexId& v, int n) {
    PeelProblem pb;
    pb.v = v;
    pb.n = n;

    std::set<VertexId> nbrs;
    for (const Edge& e : work.edges())
        if (!e.is_loop() && e.touches(v)) nbrs.insert(e.other(v));
    pb.neighbors.assign(nbrs.begin(), nbrs.end());
    pb.loop_col = pb.neighbors.size();

    std::set<int> color_set;
    for (const Edge& e : work.edges())
        if (e.touches(v)) color_set.insert(e.color);
    pb.row_colors.assign(color_set.begin(), color_set.end());

    std::size_t rows = pb.row_colors.size();
    std::size_t cols = pb.neighbors.size() + 1;
    pb.cap.assign(rows, std::vector<long>(cols, 0));
    pb.cell_edges.assign(rows, std::vector<std::vector<std::size_t>>(cols));
    pb.row_target.assign(rows, 0);
    pb.col_target.assign(cols, 0);

    auto col_of = [&](const VertexId& w) {
        return static_cast<std::size_t>(
            std::lower_bound(pb.neighbors.begin(), pb.neighbors.end(), w) - pb.neighbors.begin());
    };
    auto row_of = [&](int color) {
        return static_cast<std::size_t>(
            std::lower_bound(pb.row_colors.begin(), pb.row_colors.end(), color) -
            pb.row_colors.begin());
    };

    const auto& edges = work.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (!e.touches(v)) continue;
        std::size_t r = row_of(e.color);
        std::size_t c = e.is_loop() ? pb.loop_col : col_of(e.other(v));
        pb.cap[r][c] += 1;
        pb.cell_edges[r][c].push_back(i);
    }

    long total_loops = work.loop_count(v);
    for (std::size_t r = 0; r < rows; ++r) {
        long d = work.degree(v, pb.row_colors[r]);
        if (d % n != 0 || (d / n) % 2 != 0)
            throw std::logic_error("peel: per-color degree not an even multiple of eta");
        pb.row_target[r] = d / n;
    }
    for (std::size_t c = 0; c < pb.neighbors.size(); ++c) {
        long m = work.multiplicity(v, pb.neighbors[c]);
        if (m % n != 0) throw std::logic_error("peel: neighbor multiplicity not divisible by eta");
        pb.col_target[c] = m / n;
    }
    if ((2 * total_loops) % n != 0) throw std::logic_error("peel: loop ends not divisible by eta");
    pb.col_target[pb.loop_col] = 2 * total_loops / n;

    // Lobes: components of each color class once v is removed. Every lobe
    // touches v (the class is connected), so recording the lobe of each
    // neighbor column is enough.
    pb.lobe_of.assign(rows, std::vector<int>(pb.neighbors.size(), -1));
    pb.lobe_count.assign(rows, 0);
    const auto& vs = work.vertices();
    auto vindex = [&](const VertexId& x) {
        return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
    };
    for (std::size_t r = 0; r < rows; ++r) {
        Dsu dsu(static_cast<int>(vs.size()));
        for (const Edge& e : edges) {
            if (e.color != pb.row_colors[r] || e.touches(v)) continue;
            dsu.unite(vindex(e.a), vindex(e.b));
        }
        std::map<int, int> remap;
        for (std::size_t c = 0; c < pb.neighbors.size(); ++c) {
            if (pb.cap[r][c] == 0) continue;
            int root = dsu.find(vindex(pb.neighbors[c]));
            auto it = remap.find(root);
            if (it == remap.end()) it = remap.emplace(root, pb.lobe_count[r]++).first;
            pb.lobe_of[r][c] = it->second;
        }
    }
    return pb;
}

// Connectivity of one color class after the peel depends only on that
// class's row: the copy and the residual both keep positive class degree,
// so the class stays connected iff copy, residual, and every lobe fall in
// one component of the contact graph.
inline bool row_connected(const PeelProblem& pb, std::size_t r, const std::vector<long>& x_row) {
    int lobes = pb.lobe_count[r];
    const int kCopy = lobes;
    const int kRest = lobes + 1;
    Dsu dsu(lobes + 2);
    if (x_row[pb.loop_col] > 0) dsu.unite(kCopy, kRest);
    for (std::size_t c = 0; c < pb.neighbors.size(); ++c) {
        if (pb.cap[r][c] == 0) continue;
        int lobe = pb.lobe_of[r][c];
        if (x_row[c] > 0) dsu.unite(kCopy, lobe);
        if (x_row[c] < pb.cap[r][c]) dsu.unite(kRest, lobe);
    }
    int root = dsu.find(kCopy);
    if (dsu.find(kRest) != root) return false;
    for (int l = 0; l < lobes; ++l)
        if (dsu.find(l) != root) return false;
    return true;
}

// Integral transportation solve by shortest-augmenting-path max-flow.
// Always feasible here: scaling every capacity by 1/eta is a fractional
// solution, so an integral one exists.
inline std::vector<std::vector<long>> solve_transportation(const PeelProblem& pb,
                                                           const std::vector<std::size_t>& row_order,
                                                           const std::vector<std::size_t>& col_order) {
    std::size_t rows = pb.row_target.size();
    std::size_t cols = pb.col_target.size();
    std::size_t n_nodes = 2 + rows + cols;
    const std::size_t src = 0, snk = 1;
    auto row_node = [&](std::size_t r) { return 2 + r; };
    auto col_node = [&](std::size_t c) { return 2 + rows + c; };

    struct Arc { std::size_t to; long cap; std::size_t rev; };
    std::vector<std::vector<Arc>> adj(n_nodes);
    auto add_arc = [&](std::size_t from, std::size_t to, long cap) {
        adj[from].push_back({to, cap, adj[to].size()});
        adj[to].push_back({from, 0, adj[from].size() - 1});
    };
    for (std::size_t r : row_order) add_arc(src, row_node(r), pb.row_target[r]);
    for (std::size_t r : row_order)
        for (std::size_t c : col_order)
            if (pb.cap[r][c] > 0) add_arc(row_node(r), col_node(c), pb.cap[r][c]);
    for (std::size_t c : col_order) add_arc(col_node(c), snk, pb.col_target[c]);

    long need = std::accumulate(pb.row_target.begin(), pb.row_target.end(), 0L);
    long flow = 0;
    while (flow < need) {
        std::vector<std::pair<std::size_t, std::size_t>> pred(n_nodes, {SIZE_MAX, SIZE_MAX});
        std::queue<std::size_t> q;
        q.push(src);
        pred[src] = {src, SIZE_MAX};
        while (!q.empty() && pred[snk].first == SIZE_MAX) {
            std::size_t u = q.front();
            q.pop();
            for (std::size_t i = 0; i < adj[u].size(); ++i) {
                const Arc& a = adj[u][i];
                if (a.cap <= 0 || pred[a.to].first != SIZE_MAX) continue;
                pred[a.to] = {u, i};
                q.push(a.to);
            }
        }
        if (pred[snk].first == SIZE_MAX) break;
        long push = LONG_MAX;
        for (std::size_t u = snk; u != src;) {
            auto [pu, pi] = pred[u];
            push = std::min(push, adj[pu][pi].cap);
            u = pu;
        }
        for (std::size_t u = snk; u != src;) {
            auto [pu, pi] = pred[u];
            adj[pu][pi].cap -= push;
            adj[adj[pu][pi].to][adj[pu][pi].rev].cap += push;
            u = pu;
        }
        flow += push;
    }
    if (flow != need) throw std::logic_error("peel: transportation problem infeasible");

    std::vector<std::vector<long>> x(rows, std::vector<long>(cols, 0));
    for (std::size_t r = 0; r < rows; ++r)
        for (const Arc& a : adj[row_node(r)])
            if (a.to >= col_node(0) && a.to < col_node(0) + cols) {
                std::size_t c = a.to - col_node(0);
                long used = pb.cap[r][c] - a.cap;
                if (used > 0) x[r][c] += used;
            }
    return x;
}

inline long disconnect_score(const PeelProblem& pb, const std::vector<std::vector<long>>& x) {
    long bad = 0;
    for (std::size_t r = 0; r < pb.row_target.size(); ++r)
        if (!row_connected(pb, r, x[r])) ++bad;
    return bad;
}

// Quota-preserving 2x2 cell swaps, best-improvement with seeded tie breaks.
inline bool repair_by_swaps(const PeelProblem& pb, std::vector<std::vector<long>>& x,
                            std::mt19937_64& rng) {
    std::size_t rows = pb.row_target.size();
    std::size_t cols = pb.col_target.size();
    std::vector<char> row_ok(rows);
    auto refresh = [&](std::size_t r) { row_ok[r] = row_connected(pb, r, x[r]) ? 1 : 0; };
    for (std::size_t r = 0; r < rows; ++r) refresh(r);
    long bad = std::count(row_ok.begin(), row_ok.end(), 0);

    long limit = 64 + static_cast<long>(rows * cols) * 8;
    while (bad > 0 && limit-- > 0) {
        long best_delta = 0;
        std::vector<std::array<std::size_t, 4>> best;
        for (std::size_t r1 = 0; r1 < rows; ++r1) {
            for (std::size_t r2 = 0; r2 < rows; ++r2) {
                if (r1 == r2 || (row_ok[r1] && row_ok[r2])) continue;
                for (std::size_t c1 = 0; c1 < cols; ++c1) {
                    if (x[r1][c1] <= 0 || x[r2][c1] >= pb.cap[r2][c1]) continue;
                    for (std::size_t c2 = 0; c2 < cols; ++c2) {
                        if (c1 == c2 || x[r2][c2] <= 0 || x[r1][c2] >= pb.cap[r1][c2]) continue;
                        // move one unit r1: c1->c2, r2: c2->c1
                        x[r1][c1]--; x[r1][c2]++; x[r2][c2]--; x[r2][c1]++;
                        long delta = (row_connected(pb, r1, x[r1]) ? 1 : 0) - row_ok[r1] +
                                     (row_connected(pb, r2, x[r2]) ? 1 : 0) - row_ok[r2];
                        x[r1][c1]++; x[r1][c2]--; x[r2][c2]++; x[r2][c1]--;
                        if (delta > best_delta) {
                            best_delta = delta;
                            best.assign(1, {r1, c1, r2, c2});
                        } else if (delta == best_delta && best_delta > 0) {
                            best.push_back({r1, c1, r2, c2});
                        }
                    }
                }
            }
        }
        if (best.empty()) return false;
        auto pick = best[rng() % best.size()];
        auto [r1, c1, r2, c2] = pick;
        x[r1][c1]--; x[r1][c2]++; x[r2][c2]--; x[r2][c1]++;
        refresh(r1);
        refresh(r2);
        bad = std::count(row_ok.begin(), row_ok.end(), 0);
    }
    return bad == 0;
}

// Exhaustive fallback: depth-first over rows, enumerating every in-cap
// composition of a row that keeps its class connected, pruned by remaining
// column budgets.
inline bool exact_search(const PeelProblem& pb, std::vector<std::vector<long>>& x) {
    std::size_t rows = pb.row_target.size();
    std::size_t cols = pb.col_target.size();
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pb.row_target[a] > pb.row_target[b]; });
    std::vector<long> col_rem = pb.col_target;
    std::vector<long> cap_suffix_all(cols + 1, 0);  // per-row recomputed below
    long budget = 20'000'000;

    std::function<bool(std::size_t)> place_row = [&](std::size_t oi) -> bool {
        if (oi == rows) return true;
        std::size_t r = order[oi];
        std::vector<long>& row = x[r];
        std::fill(row.begin(), row.end(), 0);
        std::vector<long> suffix(cols + 1, 0);
        for (std::size_t c = cols; c-- > 0;)
            suffix[c] = suffix[c + 1] + std::min(pb.cap[r][c], col_rem[c]);

        std::function<bool(std::size_t, long)> place_cell = [&](std::size_t c, long rem) -> bool {
            if (--budget < 0) throw std::runtime_error("detachment: fallback search budget exhausted");
            if (c == cols) {
                if (rem != 0) return false;
                if (!row_connected(pb, r, row)) return false;
                return place_row(oi + 1);
            }
            if (suffix[c] < rem) return false;
            long hi = std::min(pb.cap[r][c], std::min(col_rem[c], rem));
            for (long take = hi; take >= 0; --take) {
                row[c] = take;
                col_rem[c] -= take;
                if (place_cell(c + 1, rem - take)) return true;
                col_rem[c] += take;
                row[c] = 0;
            }
            return false;
        };
        return place_cell(0, pb.row_target[r]);
    };
    return place_row(0);
}

inline void apply_assignment(ColoredMultigraph& work, const PeelProblem& pb,
                             const std::vector<std::vector<long>>& x, const VertexId& copy) {
    work.add_vertex(copy);
    for (std::size_t r = 0; r < pb.row_target.size(); ++r) {
        for (std::size_t c = 0; c < pb.col_target.size(); ++c) {
            long take = x[r][c];
            if (take > pb.cap[r][c]) throw std::logic_error("peel: assignment exceeds capacity");
            for (long t = 0; t < take; ++t) {
                std::size_t idx = pb.cell_edges[r][c][static_cast<std::size_t>(t)];
                // For a loop this moves exactly one end, turning it into a
                // copy-residual edge.
                work.set_edge_end(idx, pb.v, copy);
            }
        }
    }
}

inline bool peel_one(ColoredMultigraph& work, const VertexId& v, int n, const VertexId& copy,
                     std::mt19937_64& rng) {
    PeelProblem pb = build_peel_problem(work, v, n);
    std::size_t rows = pb.row_target.size();
    std::size_t cols = pb.col_target.size();

    std::vector<std::size_t> row_order(rows), col_order(cols);
    std::iota(row_order.begin(), row_order.end(), 0);
    std::iota(col_order.begin(), col_order.end(), 0);

    bool used_fallback = false;
    std::vector<std::vector<long>> x;
    bool solved = false;
    for (int attempt = 0; attempt < 6 && !solved; ++attempt) {
        x = solve_transportation(pb, row_order, col_order);
        if (disconnect_score(pb, x) == 0 || repair_by_swaps(pb, x, rng)) {
            solved = true;
            break;
        }
        std::shuffle(row_order.begin(), row_order.end(), rng);
        std::shuffle(col_order.begin(), col_order.end(), rng);
    }
    if (!solved) {
        used_fallback = true;
        if (!exact_search(pb, x))
            throw std::runtime_error("detachment: no connectivity-preserving end assignment exists");
    }
    apply_assignment(work, pb, x, copy);
    return used_fallback;
}

}  // namespace detach_detail

// Forward declaration; defined below.
inline std::vector<std::string> verify_detachment_contract(
    const ColoredMultigraph& h, const DetachmentPlan& plan, const ColoredMultigraph& g,
    const std::map<VertexId, std::vector<VertexId>>& copies);

inline DetachmentResult eta_detach(const ColoredMultigraph& h, const DetachmentPlan& plan,
                                   std::uint64_t seed = 0,
                                   const CopyNamer& namer = default_copy_name) {
    std::vector<std::string> bad = validate_plan(h, plan);
    if (!bad.empty()) {
        std::string msg = "eta_detach: plan rejected:";
        for (const std::string& s : bad) msg += "\n  " + s;
        throw std::domain_error(msg);
    }

    DetachmentResult res;
    res.graph = h;
    std::mt19937_64 rng(seed);

    for (const VertexId& v : h.vertices()) {
        int n = plan.of(v);
        if (n == 1) {
            res.copies[v] = {v};
            continue;
        }
        std::vector<VertexId> names;
        for (int i = 1; i <= n; ++i) {
            VertexId name = namer(v, i, res.graph);
            if (res.graph.has_vertex(name) || std::count(names.begin(), names.end(), name))
                throw std::domain_error("eta_detach: copy name collision at " + to_string(name));
            names.push_back(name);
        }
        for (int i = 0; i < n - 1; ++i)
            res.used_fallback |= detach_detail::peel_one(res.graph, v, n - i, names[static_cast<std::size_t>(i)], rng);
        res.graph.rename_vertex(v, names.back());
        res.copies[v] = names;
    }

    std::vector<std::string> broken = verify_detachment_contract(h, plan, res.graph, res.copies);
    if (!broken.empty()) {
        std::string msg = "eta_detach: contract violated:";
        for (const std::string& s : broken) msg += "\n  " + s;
        throw std::runtime_error(msg);
    }
    return res;
}

// Independent re-check of every contract clause.
inline std::vector<std::string> verify_detachment_contract(
    const ColoredMultigraph& h, const DetachmentPlan& plan, const ColoredMultigraph& g,
    const std::map<VertexId, std::vector<VertexId>>& copies) {
    std::vector<std::string> out;

    std::size_t expected_vertices = 0;
    for (const VertexId& v : h.vertices()) {
        auto it = copies.find(v);
        if (it == copies.end()) {
            out.push_back("missing copy list for " + to_string(v));
            continue;
        }
        if (static_cast<int>(it->second.size()) != plan.of(v))
            out.push_back("copy count mismatch at " + to_string(v));
        expected_vertices += it->second.size();
        for (const VertexId& c : it->second)
            if (!g.has_vertex(c)) out.push_back("copy " + to_string(c) + " missing from output");
    }
    if (g.vertices().size() != expected_vertices)
        out.push_back("output vertex count differs from the sum of eta");
    if (!out.empty()) return out;

    if (g.edge_count() != h.edge_count()) out.push_back("edge count not preserved");
    for (const Edge& e : g.edges())
        if (e.is_loop()) out.push_back("output contains a loop at " + to_string(e.a));

    for (const VertexId& v : h.vertices()) {
        int n = plan.of(v);
        const auto& cv = copies.at(v);
        if (n >= 2) {
            long pairs = static_cast<long>(n) * (n - 1) / 2;
            long want = h.loop_count(v) / pairs;
            for (std::size_t i = 0; i < cv.size(); ++i)
                for (std::size_t j = i + 1; j < cv.size(); ++j)
                    if (g.multiplicity(cv[i], cv[j]) != want)
                        out.push_back("clause (i): m(" + to_string(cv[i]) + "," + to_string(cv[j]) +
                                      ") != loops/C(eta,2) at " + to_string(v));
        }
        for (int j = 0; j <= h.max_color(); ++j) {
            long want = h.degree(v, j) / n;
            for (const VertexId& c : cv)
                if (g.degree(c, j) != want)
                    out.push_back("clause (iii): degree of " + to_string(c) + " in color " +
                                  std::to_string(j) + " is " + std::to_string(g.degree(c, j)) +
                                  ", expected " + std::to_string(want));
        }
    }
    const auto& vs = h.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            long want = h.multiplicity(vs[i], vs[j]) /
                        (static_cast<long>(plan.of(vs[i])) * plan.of(vs[j]));
            for (const VertexId& ci : copies.at(vs[i]))
                for (const VertexId& cj : copies.at(vs[j]))
                    if (g.multiplicity(ci, cj) != want)
                        out.push_back("clause (ii): m(" + to_string(ci) + "," + to_string(cj) +
                                      ") != m/(eta*eta) for pair " + to_string(vs[i]) + "," +
                                      to_string(vs[j]));
        }
    }
    // Connectivity is preserved: any class connected on its support in the
    // input stays connected in the output.
    for (int j = 0; j <= g.max_color(); ++j)
        if (h.class_connected_on_support(j) && !g.class_connected_on_support(j))
            out.push_back("color class " + std::to_string(j) + " of the output is disconnected");
    return out;
}

// Inverse of detachment: squash every copy list back onto its origin.
// Edges between copies of one origin become loops.
inline ColoredMultigraph amalgamate(const ColoredMultigraph& g,
                                    const std::map<VertexId, std::vector<VertexId>>& copies) {
    std::map<VertexId, VertexId> origin_of;
    for (const auto& [origin, list] : copies)
        for (const VertexId& c : list) origin_of[c] = origin;
    ColoredMultigraph out(g.max_color());
    for (const auto& [origin, list] : copies) out.add_vertex(origin);
    for (const Edge& e : g.edges()) {
        auto ia = origin_of.find(e.a);
        auto ib = origin_of.find(e.b);
        if (ia == origin_of.end() || ib == origin_of.end())
            throw std::domain_error("amalgamate: vertex not covered by the copy map");
        out.add_edge(ia->second, ib->second, e.color);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Euler circuits and 2-factorization.

struct EulerWalk {
    std::vector<std::size_t> edge_order;   // indices into g.edges()
    std::vector<VertexId> vertex_order;    // visited vertices; closed walk
};

// Closed walk traversing every edge exactly once. Requires even degrees and
// a connected support. Empty graphs yield an empty walk.
inline EulerWalk euler_circuit(const ColoredMultigraph& g) {
    EulerWalk walk;
    if (g.edge_count() == 0) return walk;
    for (const VertexId& v : g.vertices())
        if (g.degree(v) % 2 != 0)
            throw std::domain_error("euler_circuit: odd degree at " + to_string(v));

    const auto& vs = g.vertices();
    auto vindex = [&](const VertexId& x) {
        return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
    };
    std::vector<std::vector<std::size_t>> incident(vs.size());
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        incident[vindex(e.a)].push_back(i);
        if (!e.is_loop()) incident[vindex(e.b)].push_back(i);
    }
    {
        detach_detail::Dsu dsu(static_cast<int>(vs.size()));
        for (const Edge& e : g.edges()) dsu.unite(static_cast<int>(vindex(e.a)), static_cast<int>(vindex(e.b)));
        int root = -1;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (incident[i].empty()) continue;
            int r = dsu.find(static_cast<int>(i));
            if (root == -1) root = r;
            else if (r != root) throw std::domain_error("euler_circuit: support is disconnected");
        }
    }

    std::vector<char> used(g.edges().size(), 0);
    std::vector<std::size_t> cursor(vs.size(), 0);
    std::size_t start = 0;
    while (incident[start].empty()) ++start;

    // Hierholzer, iterative.
    std::vector<std::pair<std::size_t, std::size_t>> stack;  // (vertex idx, via edge)
    stack.push_back({start, SIZE_MAX});
    std::vector<std::pair<std::size_t, std::size_t>> path;
    while (!stack.empty()) {
        auto [at, via] = stack.back();
        std::size_t& cur = cursor[at];
        while (cur < incident[at].size() && used[incident[at][cur]]) ++cur;
        if (cur == incident[at].size()) {
            path.push_back(stack.back());
            stack.pop_back();
        } else {
            std::size_t ei = incident[at][cur];
            used[ei] = 1;
            const Edge& e = g.edges()[ei];
            std::size_t next = e.is_loop() ? at : vindex(e.other(vs[at]));
            stack.push_back({next, ei});
        }
    }
    std::reverse(path.begin(), path.end());
    for (std::size_t i = 0; i < path.size(); ++i) {
        walk.vertex_order.push_back(vs[path[i].first]);
        if (i + 1 < path.size()) walk.edge_order.push_back(path[i + 1].second);
    }
    for (char u : used)
        if (!u) throw std::domain_error("euler_circuit: support is disconnected");
    return walk;
}

struct TwoFactorization {
    std::vector<std::vector<std::size_t>> factors;  // edge indices into the input
};

namespace detach_detail {

// Perfect matchings of a regular bipartite multigraph, peeled one at a time
// (Koenig). arcs[i] = (tail, head); returns factor id per arc.
inline std::vector<int> peel_matchings(const std::vector<std::pair<int, int>>& arcs, int n_vertices,
                                       int degree) {
    std::vector<int> factor_of(arcs.size(), -1);
    for (int f = 0; f < degree; ++f) {
        std::vector<int> match_head(n_vertices, -1);  // head -> arc
        std::vector<int> match_tail(n_vertices, -1);  // tail -> arc
        for (int tail = 0; tail < n_vertices; ++tail) {
            std::vector<char> seen(n_vertices, 0);
            std::function<bool(int)> try_tail = [&](int t) -> bool {
                for (std::size_t i = 0; i < arcs.size(); ++i) {
                    if (factor_of[i] != -1 || arcs[i].first != t) continue;
                    int h = arcs[i].second;
                    if (seen[h]) continue;
                    seen[h] = 1;
                    if (match_head[h] == -1 || try_tail(arcs[match_head[h]].first)) {
                        match_head[h] = static_cast<int>(i);
                        match_tail[t] = static_cast<int>(i);
                        return true;
                    }
                }
                return false;
            };
            if (match_tail[tail] == -1 && !try_tail(tail))
                throw std::logic_error("two_factorize: regular bipartite matching failed");
        }
        for (int h = 0; h < n_vertices; ++h)
            if (match_head[h] != -1) factor_of[static_cast<std::size_t>(match_head[h])] = f;
    }
    return factor_of;
}

}  // namespace detach_detail

// Partition of the edges into 2-regular factors. Components in which every
// vertex has the same degree 2t split into t factors spanning the whole
// component; other even components fall back to a cycle decomposition.
// Factors are zipped across components by index.
inline TwoFactorization two_factorize(const ColoredMultigraph& g) {
    for (const VertexId& v : g.vertices())
        if (g.degree(v) % 2 != 0)
            throw std::domain_error("two_factorize: odd degree at " + to_string(v));
    TwoFactorization out;
    if (g.edge_count() == 0) return out;

    ColoredMultigraph::Components comp = g.components();
    const auto& vs = g.vertices();
    auto vindex = [&](const VertexId& x) {
        return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
    };

    std::size_t n_comp = comp.count;
    for (std::size_t ci = 0; ci < n_comp; ++ci) {
        std::vector<std::size_t> edge_ids;
        for (std::size_t i = 0; i < g.edges().size(); ++i)
            if (comp.label[vindex(g.edges()[i].a)] == ci) edge_ids.push_back(i);
        if (edge_ids.empty()) continue;

        // Support vertices and their degrees within the component.
        std::map<VertexId, long> deg;
        for (std::size_t i : edge_ids) {
            const Edge& e = g.edges()[i];
            deg[e.a] += e.is_loop() ? 2 : 1;
            if (!e.is_loop()) deg[e.b] += 1;
        }
        bool regular = true;
        long d = deg.begin()->second;
        for (const auto& [v, dv] : deg)
            if (dv != d) regular = false;

        ColoredMultigraph sub(g.max_color());
        for (const auto& [v, dv] : deg) sub.add_vertex(v);
        for (std::size_t i : edge_ids) sub.add_edge(g.edges()[i].a, g.edges()[i].b, g.edges()[i].color);
        EulerWalk walk = euler_circuit(sub);

        std::vector<std::vector<std::size_t>> comp_factors;
        if (regular && d >= 2) {
            // Orient along the circuit, then peel d/2 perfect matchings of
            // the tail/head bipartite multigraph: each matching is a
            // spanning union of directed cycles, i.e. a 2-factor.
            std::vector<VertexId> support;
            for (const auto& [v, dv] : deg) support.push_back(v);
            auto sindex = [&](const VertexId& x) {
                return static_cast<int>(std::lower_bound(support.begin(), support.end(), x) -
                                        support.begin());
            };
            std::vector<std::pair<int, int>> arcs;
            for (std::size_t t = 0; t < walk.edge_order.size(); ++t)
                arcs.push_back({sindex(walk.vertex_order[t]), sindex(walk.vertex_order[t + 1])});
            std::vector<int> factor_of = detach_detail::peel_matchings(
                arcs, static_cast<int>(support.size()), static_cast<int>(d / 2));
            comp_factors.assign(static_cast<std::size_t>(d / 2), {});
            for (std::size_t t = 0; t < arcs.size(); ++t)
                comp_factors[static_cast<std::size_t>(factor_of[t])].push_back(
                    edge_ids[walk.edge_order[t]]);
        } else {
            // Cycle decomposition read off the circuit with a vertex stack.
            std::vector<std::size_t> pending;  // positions in walk
            std::map<VertexId, std::size_t> on_stack;
            std::vector<VertexId> vstack = {walk.vertex_order[0]};
            on_stack[walk.vertex_order[0]] = 0;
            for (std::size_t t = 0; t < walk.edge_order.size(); ++t) {
                pending.push_back(edge_ids[walk.edge_order[t]]);
                const VertexId& w = walk.vertex_order[t + 1];
                auto it = on_stack.find(w);
                if (it != on_stack.end()) {
                    std::size_t depth = it->second;
                    std::vector<std::size_t> cyc(pending.begin() + static_cast<long>(depth),
                                                 pending.end());
                    pending.resize(depth);
                    while (vstack.size() > depth + 1) {
                        on_stack.erase(vstack.back());
                        vstack.pop_back();
                    }
                    comp_factors.push_back(std::move(cyc));
                } else {
                    on_stack[w] = vstack.size();
                    vstack.push_back(w);
                }
            }
            if (!pending.empty())
                throw std::logic_error("two_factorize: circuit did not close into cycles");
        }

        for (std::size_t f = 0; f < comp_factors.size(); ++f) {
            if (f >= out.factors.size()) out.factors.emplace_back();
            out.factors[f].insert(out.factors[f].end(), comp_factors[f].begin(),
                                  comp_factors[f].end());
        }
    }
    return out;
}

}  // namespace hamembed
