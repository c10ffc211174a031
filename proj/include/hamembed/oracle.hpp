#pragma once

// Independent brute-force oracle and instance generators, used by the test
// suites. Nothing here shares code with the constructive pipeline: the
// oracle decides Hamiltonian decomposability by backtracking over cycles.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hamembed/conditions.hpp"
#include "hamembed/gdd.hpp"
#include "hamembed/multigraph.hpp"

namespace hamembed {

struct EnumerationBudget {
    std::size_t max_vertices = 16;
    int max_colors = 64;
    std::chrono::milliseconds timeout{10000};
    long long max_nodes = 50'000'000;
};

enum class OracleStatus { found, none, timeout };

struct OracleOutcome {
    OracleStatus status = OracleStatus::none;
    std::optional<ColoredMultigraph> decomposition;  // colored 1..k when found
    long long nodes = 0;
};

namespace oracle_detail {

struct BudgetExceeded {};

struct CycleSearch {
    int n = 0;
    long k = 0;
    std::vector<std::vector<long>> rem;  // remaining multiplicities
    std::vector<std::vector<int>> cycles;
    std::vector<char> used;
    std::vector<int> path;
    long long nodes = 0;
    long long max_nodes = 0;
    std::chrono::steady_clock::time_point deadline;

    void tick() {
        if (++nodes > max_nodes) throw BudgetExceeded{};
        if ((nodes & 0xFFF) == 0 && std::chrono::steady_clock::now() > deadline)
            throw BudgetExceeded{};
    }

    bool remainder_connected() const {
        std::vector<int> parent(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            return x;
        };
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rem[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0)
                    parent[static_cast<std::size_t>(find(i))] = find(j);
        int root = find(0);
        for (int i = 1; i < n; ++i)
            if (find(i) != root) return false;
        return true;
    }

    bool next_cycle(long c) {
        if (c == k) return true;
        path.assign(1, 0);
        std::fill(used.begin(), used.end(), 0);
        used[0] = 1;
        return extend(c);
    }

    bool extend(long c) {
        tick();
        int cur = path.back();
        if (static_cast<int>(path.size()) == n) {
            if (rem[static_cast<std::size_t>(cur)][0] <= 0) return false;
            if (n > 2 && path[1] > path[static_cast<std::size_t>(n - 1)]) return false;  // fix direction
            rem[static_cast<std::size_t>(cur)][0]--;
            rem[0][static_cast<std::size_t>(cur)]--;
            cycles.push_back(path);
            std::vector<int> saved_path = path;      // next_cycle reuses the
            std::vector<char> saved_used = used;     // shared scratch state
            bool ok = (c + 1 == k || remainder_connected()) && next_cycle(c + 1);
            if (ok) return true;
            path = std::move(saved_path);
            used = std::move(saved_used);
            cycles.pop_back();
            rem[static_cast<std::size_t>(cur)][0]++;
            rem[0][static_cast<std::size_t>(cur)]++;
            return false;
        }
        for (int w = 1; w < n; ++w) {
            if (used[static_cast<std::size_t>(w)] ||
                rem[static_cast<std::size_t>(cur)][static_cast<std::size_t>(w)] <= 0)
                continue;
            rem[static_cast<std::size_t>(cur)][static_cast<std::size_t>(w)]--;
            rem[static_cast<std::size_t>(w)][static_cast<std::size_t>(cur)]--;
            used[static_cast<std::size_t>(w)] = 1;
            path.push_back(w);
            if (extend(c)) return true;
            path.pop_back();
            used[static_cast<std::size_t>(w)] = 0;
            rem[static_cast<std::size_t>(cur)][static_cast<std::size_t>(w)]++;
            rem[static_cast<std::size_t>(w)][static_cast<std::size_t>(cur)]++;
        }
        return false;
    }
};

}  // namespace oracle_detail

// Backtracking search for a partition of K(a^(parts); lambda, mu) into
// Hamiltonian cycles. Returns one decomposition, none, or an explicit
// timeout when the budget runs out.
inline OracleOutcome brute_force_decompose(const GddParams& params, int parts,
                                           const EnumerationBudget& budget = {}) {
    params.validate();
    if (parts < 1) throw std::domain_error("parts must be >= 1");
    std::size_t n = static_cast<std::size_t>(parts) * static_cast<std::size_t>(params.a);
    if (n > budget.max_vertices)
        throw std::domain_error("instance exceeds the enumeration vertex budget");

    OracleOutcome out;
    long d = params.lambda * (params.a - 1) + params.mu * params.a * (parts - 1);
    if (d % 2 != 0) {  // edges cannot split into spanning cycles
        out.status = OracleStatus::none;
        return out;
    }
    long k = d / 2;
    ColoredMultigraph base = build_gdd(params, parts);
    if (k == 0) {
        out.status = OracleStatus::found;
        out.decomposition = base;
        return out;
    }
    if (k > budget.max_colors) {
        out.status = OracleStatus::timeout;
        return out;
    }

    oracle_detail::CycleSearch search;
    search.n = static_cast<int>(n);
    search.k = k;
    search.max_nodes = budget.max_nodes;
    search.deadline = std::chrono::steady_clock::now() + budget.timeout;
    search.rem.assign(n, std::vector<long>(n, 0));
    const auto& vs = base.vertices();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            long m = vs[i].part == vs[j].part ? params.lambda : params.mu;
            search.rem[i][j] = search.rem[j][i] = m;
        }
    search.used.assign(n, 0);

    bool found = false;
    try {
        found = search.next_cycle(0);
    } catch (const oracle_detail::BudgetExceeded&) {
        out.status = OracleStatus::timeout;
        out.nodes = search.nodes;
        return out;
    }
    out.nodes = search.nodes;
    if (!found) {
        out.status = OracleStatus::none;
        return out;
    }

    ColoredMultigraph dec(static_cast<int>(k));
    for (const VertexId& v : vs) dec.add_vertex(v);
    for (std::size_t c = 0; c < search.cycles.size(); ++c) {
        const auto& cyc = search.cycles[c];
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            const VertexId& x = vs[static_cast<std::size_t>(cyc[i])];
            const VertexId& y = vs[static_cast<std::size_t>(cyc[(i + 1) % cyc.size()])];
            dec.add_edge(x, y, static_cast<int>(c) + 1);
        }
    }
    out.status = OracleStatus::found;
    out.decomposition = dec;
    return out;
}

struct GeneratedInput {
    OracleStatus status = OracleStatus::none;
    std::optional<ColoredMultigraph> instance;
};

// Restriction of a (seed-permuted) Hamiltonian decomposition of
// K(a^(p+r); lambda, mu) to its first p parts. The restriction of a
// spanning cycle to a vertex subset is a path forest, so the output always
// satisfies the embedding conditions.
inline GeneratedInput generate_valid_input(const GddParams& params, std::uint64_t seed,
                                           const EnumerationBudget& budget = {}) {
    GeneratedInput out;
    OracleOutcome oracle = brute_force_decompose(params, params.p + params.r, budget);
    out.status = oracle.status;
    if (oracle.status != OracleStatus::found) return out;
    const ColoredMultigraph& full = *oracle.decomposition;

    std::mt19937_64 rng(seed);
    int parts = params.p + params.r;
    long k = full.max_color();
    std::vector<int> color_perm(static_cast<std::size_t>(k) + 1);
    for (long j = 0; j <= k; ++j) color_perm[static_cast<std::size_t>(j)] = static_cast<int>(j);
    std::shuffle(color_perm.begin() + 1, color_perm.end(), rng);
    std::vector<int> part_perm(static_cast<std::size_t>(parts) + 1);
    for (int i = 0; i <= parts; ++i) part_perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(part_perm.begin() + 1, part_perm.end(), rng);
    std::vector<std::vector<int>> slot_perm(static_cast<std::size_t>(parts) + 1);
    for (int i = 1; i <= parts; ++i) {
        slot_perm[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(params.a) + 1);
        for (int s = 0; s <= params.a; ++s) slot_perm[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = s;
        std::shuffle(slot_perm[static_cast<std::size_t>(i)].begin() + 1,
                     slot_perm[static_cast<std::size_t>(i)].end(), rng);
    }
    auto relabel = [&](const VertexId& v) {
        return VertexId{part_perm[static_cast<std::size_t>(v.part)],
                        slot_perm[static_cast<std::size_t>(v.part)][static_cast<std::size_t>(v.slot)],
                        v.tier};
    };

    ColoredMultigraph inst(static_cast<int>(k));
    for (int part = 1; part <= params.p; ++part)
        for (int slot = 1; slot <= params.a; ++slot)
            inst.add_vertex(VertexId{part, slot, VertexTier::original});
    for (const Edge& e : full.edges()) {
        VertexId x = relabel(e.a);
        VertexId y = relabel(e.b);
        if (x.part <= params.p && y.part <= params.p)
            inst.add_edge(x, y, color_perm[static_cast<std::size_t>(e.color)]);
    }
    out.instance = inst;
    return out;
}

struct Enumeration {
    std::vector<ColoredMultigraph> colorings;
    std::vector<Verdict> verdicts;
    bool truncated = false;
};

// Every k-coloring of K(a^(p); lambda, mu), each tagged with its condition
// verdict. With `quotient` set, only colorings canonical under color
// permutation are emitted. `k_override` forces a declared color count other
// than the parameter formula (useful for probing condition (i)).
inline Enumeration enumerate_inputs(const GddParams& params, const EnumerationBudget& budget = {},
                                    bool quotient = false, long k_override = 0) {
    params.validate();
    long k = k_override > 0 ? k_override : params.k();
    ColoredMultigraph base = build_gdd(params, params.p);
    base.set_max_color(static_cast<int>(k));
    std::size_t m = base.edge_count();

    Enumeration out;
    if (k == 0) {
        if (m == 0) {
            out.colorings.push_back(base);
            out.verdicts.push_back(check_main_conditions(base, params));
        }
        return out;
    }

    std::vector<int> assign(m, 1);
    auto deadline = std::chrono::steady_clock::now() + budget.timeout;
    long long emitted = 0;
    while (true) {
        if (emitted >= budget.max_nodes || std::chrono::steady_clock::now() > deadline) {
            out.truncated = true;
            break;
        }
        bool canonical = true;
        if (quotient && k >= 2) {
            // lexicographically least relabeling over all color permutations
            std::vector<int> perm(static_cast<std::size_t>(k) + 1, 0);
            std::vector<int> best = assign;
            std::vector<int> ids(static_cast<std::size_t>(k));
            for (long j = 0; j < k; ++j) ids[static_cast<std::size_t>(j)] = static_cast<int>(j) + 1;
            std::sort(ids.begin(), ids.end());
            do {
                for (long j = 0; j < k; ++j) perm[static_cast<std::size_t>(j + 1)] = ids[static_cast<std::size_t>(j)];
                std::vector<int> mapped(m);
                for (std::size_t i = 0; i < m; ++i) mapped[i] = perm[static_cast<std::size_t>(assign[i])];
                if (mapped < best) best = mapped;
            } while (std::next_permutation(ids.begin(), ids.end()));
            canonical = best == assign;
        }
        if (canonical) {
            ColoredMultigraph g = base;
            for (std::size_t i = 0; i < m; ++i) g.set_edge_color(i, assign[i]);
            out.colorings.push_back(g);
            out.verdicts.push_back(check_main_conditions(g, params));
            ++emitted;
        }
        // odometer
        std::size_t pos = 0;
        while (pos < m && assign[pos] == k) assign[pos++] = 1;
        if (pos == m) break;
        ++assign[pos];
    }
    return out;
}

}  // namespace hamembed
