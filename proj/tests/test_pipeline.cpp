#include "hamembed/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include <gtest/gtest.h>

#include "hamembed/oracle.hpp"
#include "test_support.hpp"

using namespace hamembed;
using hamembed::testing::make_graph;
using hamembed::testing::vid;

TEST(Embed, MatchingsExtendToTwoSixCycles) {
    GddParams params = hamembed::testing::k22_params();
    ColoredMultigraph g = hamembed::testing::k22_matchings();
    EmbedReport report = embed(g, params, 1);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    ASSERT_TRUE(report.result.has_value());
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    EXPECT_TRUE(conforms_to_gdd(*report.result, params, 3));
    for (int j = 1; j <= 2; ++j) {
        ColoredMultigraph cls = report.result->color_class(j);
        EXPECT_EQ(cls.edge_count(), 6u);
        EXPECT_EQ(cls.components().count, 1u);
    }
}

TEST(Embed, BoundaryPairExtendsToTwoFourCycles) {
    GddParams params = hamembed::testing::boundary_pair_params();
    ColoredMultigraph g = hamembed::testing::boundary_pair();
    EmbedReport report = embed(g, params, 1);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_EQ(report.regime, RegimeTag::Boundary);
    ASSERT_TRUE(report.result.has_value());
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    for (int j = 1; j <= 2; ++j)
        EXPECT_EQ(report.result->color_class(j).edge_count(), 4u);
}

TEST(Embed, ConditionFailureGivesNoWithIdentifier) {
    // Class 2 is a single edge: omega_2 = 3 > a*r.
    ColoredMultigraph g = make_graph(2,
                                     {vid(1, 1), vid(1, 2), vid(2, 1), vid(2, 2)},
                                     {{1, 1, 2, 1, 1}, {1, 1, 2, 2, 1}, {1, 2, 2, 2, 1},
                                      {1, 2, 2, 1, 2}});
    EmbedReport report = embed(g, hamembed::testing::k22_params(), 1);
    EXPECT_EQ(report.verdict.embeddable, Verdict::Answer::no);
    EXPECT_FALSE(report.result.has_value());
    EXPECT_NE(std::find(report.verdict.violated.begin(), report.verdict.violated.end(),
                        "thm1.2.iv"),
              report.verdict.violated.end());
}

// a=2, p=3, lambda=6, mu=1, r=3. All four necessary conditions hold but the
// sum condition fails (sum of s_j = 9 < kr - mu a^2 C(r,2) = 12), so the
// verdict must be "undetermined", never "no".
TEST(Embed, OpenRegimeReportsUndetermined) {
    GddParams params{2, 3, 6, 1, 3};
    ColoredMultigraph g = make_graph(
        8,
        {vid(1, 1), vid(1, 2), vid(2, 1), vid(2, 2), vid(3, 1), vid(3, 2)},
        {
            {1, 1, 1, 2, 1}, {2, 1, 2, 2, 1},                                    // c1: two pure edges
            {1, 1, 1, 2, 2}, {3, 1, 3, 2, 2},                                    // c2
            {2, 1, 2, 2, 3}, {3, 1, 3, 2, 3},                                    // c3
            {1, 1, 1, 2, 4}, {1, 2, 2, 2, 4}, {2, 1, 2, 2, 4}, {2, 1, 3, 1, 4},  // c4: spanning path
            {3, 1, 3, 2, 4},
            {1, 1, 1, 2, 5}, {1, 1, 2, 1, 5}, {2, 1, 2, 2, 5}, {2, 2, 3, 1, 5},  // c5
            {3, 1, 3, 2, 5},
            {1, 1, 1, 2, 6}, {1, 2, 2, 1, 6}, {2, 1, 2, 2, 6}, {1, 1, 3, 2, 6},  // c6
            {3, 1, 3, 2, 6},
            {1, 1, 1, 2, 7}, {1, 1, 2, 2, 7}, {2, 1, 2, 2, 7}, {1, 2, 3, 2, 7},  // c7
            {3, 1, 3, 2, 7},
            {1, 1, 3, 1, 8}, {1, 2, 3, 1, 8}, {2, 1, 3, 2, 8}, {2, 2, 3, 2, 8},  // c8: two 2-paths
        });
    Verdict conditions = check_main_conditions(g, params);
    ASSERT_TRUE(conditions.passed());
    ASSERT_FALSE(check_sum_condition(conditions.stats, params));
    EmbedReport report = embed(g, params, 1);
    EXPECT_EQ(report.verdict.embeddable, Verdict::Answer::undetermined);
    EXPECT_EQ(report.regime, RegimeTag::Undetermined);
    EXPECT_TRUE(report.verdict.violated.empty());
    EXPECT_FALSE(report.result.has_value());
}

TEST(Embed, EdgelessSinglePartInstance) {
    // Two isolated vertices embed into a single Hamiltonian 4-cycle.
    GddParams params{2, 1, 0, 1, 1};
    ColoredMultigraph g = build_gdd(params, 1);
    g.set_max_color(1);
    EmbedReport report = embed(g, params, 1);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    EXPECT_EQ(report.result->edge_count(), 4u);
}

TEST(Embed, RadiusTwoConstruction) {
    // The same matchings instance pushed two parts out: exercises hub loops,
    // the extra color class, and a genuine r-way detachment.
    GddParams params{2, 2, 0, 1, 2};
    ColoredMultigraph g = build_gdd(params, 2);
    g.set_max_color(static_cast<int>(params.k()));  // k = 3
    // classes: two matchings and one empty class
    const VertexId a1 = vid(1, 1), a2 = vid(1, 2), b1 = vid(2, 1), b2 = vid(2, 2);
    ColoredMultigraph colored(3);
    for (const VertexId& v : {a1, a2, b1, b2}) colored.add_vertex(v);
    colored.add_edge(a1, b1, 1);
    colored.add_edge(a2, b2, 1);
    colored.add_edge(a1, b2, 2);
    colored.add_edge(a2, b1, 2);
    EmbedReport report = embed(colored, params, 3);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_TRUE(verify_embedding(colored, *report.result, params).empty());
    EXPECT_TRUE(conforms_to_gdd(*report.result, params, 4));
}

TEST(Embed, BoundaryRadiusTwo) {
    // lambda = mu a (p+r-1) = 4: four parallel pure edges, one per class,
    // extended into 4 Hamiltonian 6-cycles of K(2^(3); 4, 1).
    GddParams params{2, 1, 4, 1, 2};
    ASSERT_TRUE(params.is_boundary());
    ColoredMultigraph g(4);
    g.add_vertex(vid(1, 1));
    g.add_vertex(vid(1, 2));
    for (int j = 1; j <= 4; ++j) g.add_edge(vid(1, 1), vid(1, 2), j);
    EmbedReport report = embed(g, params, 2);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_EQ(report.regime, RegimeTag::Boundary);
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    EXPECT_TRUE(conforms_to_gdd(*report.result, params, 3));
}

TEST(Embed, BoundaryWiderParts) {
    // a=3, mu=2, lambda = mu a (p+r-1) = 6, k = 9: every class is a 2-edge
    // path covering the single part.
    GddParams params{3, 1, 6, 2, 1};
    ASSERT_TRUE(params.is_boundary());
    ColoredMultigraph g(9);
    for (int s = 1; s <= 3; ++s) g.add_vertex(vid(1, s));
    int color = 1;
    for (int rep = 0; rep < 3; ++rep) {
        g.add_edge(vid(1, 1), vid(1, 2), color);
        g.add_edge(vid(1, 2), vid(1, 3), color);
        ++color;
        g.add_edge(vid(1, 2), vid(1, 3), color);
        g.add_edge(vid(1, 1), vid(1, 3), color);
        ++color;
        g.add_edge(vid(1, 1), vid(1, 3), color);
        g.add_edge(vid(1, 1), vid(1, 2), color);
        ++color;
    }
    ASSERT_TRUE(check_boundary_conditions(g, params).passed());
    EmbedReport report = embed(g, params, 6);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    for (int j = 1; j <= 9; ++j)
        EXPECT_EQ(report.result->color_class(j).edge_count(), 6u);
}

TEST(Embed, BoundaryRadiusTwoWithTwoParts) {
    // a=2, p=2, r=2, mu=1, lambda = 6, k = 6. Two classes are pure-edge
    // pairs (omega = 2), four are pure-mixed-pure paths (omega = 1); the
    // hub carries 4 loops that the boundary coloring must exhaust exactly.
    GddParams params{2, 2, 6, 1, 2};
    ASSERT_TRUE(params.is_boundary());
    ColoredMultigraph g(6);
    for (int part = 1; part <= 2; ++part)
        for (int slot = 1; slot <= 2; ++slot) g.add_vertex(vid(part, slot));
    auto pure = [&](int part, int c) { g.add_edge(vid(part, 1), vid(part, 2), c); };
    pure(1, 1); pure(2, 1);
    pure(1, 2); pure(2, 2);
    pure(1, 3); pure(2, 3); g.add_edge(vid(1, 2), vid(2, 1), 3);
    pure(1, 4); pure(2, 4); g.add_edge(vid(1, 1), vid(2, 1), 4);
    pure(1, 5); pure(2, 5); g.add_edge(vid(1, 2), vid(2, 2), 5);
    pure(1, 6); pure(2, 6); g.add_edge(vid(1, 1), vid(2, 2), 6);
    Verdict v = check_boundary_conditions(g, params);
    ASSERT_TRUE(v.passed());
    for (const ClassStats& st : v.stats) EXPECT_EQ(st.mixed_edges + st.omega, params.p);
    EmbedReport report = embed(g, params, 8);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    EXPECT_TRUE(conforms_to_gdd(*report.result, params, 4));
}

TEST(Embed, EverySeedYieldsAVerifiedResult) {
    GddParams params{2, 2, 0, 1, 2};
    ColoredMultigraph g(3);
    for (int part = 1; part <= 2; ++part)
        for (int slot = 1; slot <= 2; ++slot) g.add_vertex(vid(part, slot));
    g.add_edge(vid(1, 1), vid(2, 1), 1);
    g.add_edge(vid(1, 2), vid(2, 2), 1);
    g.add_edge(vid(1, 1), vid(2, 2), 2);
    g.add_edge(vid(1, 2), vid(2, 1), 2);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        EmbedReport report = embed(g, params, seed);
        ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
        EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    }
}

TEST(Embed, RadiusThreeFromEmptyInstance) {
    // Two isolated vertices, three declared colors: the construction must
    // peel the hub three ways and reabsorb a 9-loop extra class.
    GddParams params{2, 1, 0, 1, 3};
    ColoredMultigraph g = build_gdd(params, 1);
    g.set_max_color(static_cast<int>(params.k()));  // k = 3
    EmbedReport report = embed(g, params, 4);
    ASSERT_EQ(report.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_TRUE(verify_embedding(g, *report.result, params).empty());
    EXPECT_TRUE(conforms_to_gdd(*report.result, params, 4));
    for (int j = 1; j <= 3; ++j) {
        ColoredMultigraph cls = report.result->color_class(j);
        EXPECT_EQ(cls.edge_count(), 8u);
        EXPECT_EQ(cls.components().count, 1u);
    }
}

TEST(VerifyEmbedding, DetectsSplitClass) {
    // Two disjoint triangles in class 1 instead of a 6-cycle.
    GddParams params = hamembed::testing::k22_params();
    ColoredMultigraph g = hamembed::testing::k22_matchings();
    ColoredMultigraph bad(2);
    std::vector<VertexId> vs;
    for (int part = 1; part <= 3; ++part)
        for (int slot = 1; slot <= 2; ++slot) {
            VertexId v{part, slot, part <= 2 ? VertexTier::original : VertexTier::added};
            bad.add_vertex(v);
            vs.push_back(v);
        }
    auto at = [&](int part, int slot) {
        return VertexId{part, slot, part <= 2 ? VertexTier::original : VertexTier::added};
    };
    // class 1: triangles 11-21-31 and 12-22-32
    bad.add_edge(at(1, 1), at(2, 1), 1);
    bad.add_edge(at(2, 1), at(3, 1), 1);
    bad.add_edge(at(3, 1), at(1, 1), 1);
    bad.add_edge(at(1, 2), at(2, 2), 1);
    bad.add_edge(at(2, 2), at(3, 2), 1);
    bad.add_edge(at(3, 2), at(1, 2), 1);
    // class 2: the complementary 6-cycle
    bad.add_edge(at(1, 1), at(2, 2), 2);
    bad.add_edge(at(2, 2), at(3, 1), 2);
    bad.add_edge(at(3, 1), at(1, 2), 2);
    bad.add_edge(at(1, 2), at(2, 1), 2);
    bad.add_edge(at(2, 1), at(3, 2), 2);
    bad.add_edge(at(3, 2), at(1, 1), 2);
    std::vector<std::string> fail = verify_embedding(g, bad, params);
    ASSERT_EQ(fail.size(), 1u);
    EXPECT_NE(fail[0].find("color class 1"), std::string::npos);
}

TEST(VerifyEmbedding, DetectsRecoloredOriginalEdge) {
    GddParams params = hamembed::testing::k22_params();
    ColoredMultigraph g = hamembed::testing::k22_matchings();
    EmbedReport report = embed(g, params, 1);
    ASSERT_TRUE(report.result.has_value());
    ColoredMultigraph mutated = *report.result;
    for (std::size_t i = 0; i < mutated.edges().size(); ++i) {
        const Edge& e = mutated.edges()[i];
        if (e.a.part <= params.p && e.b.part <= params.p) {
            mutated.set_edge_color(i, e.color == 1 ? 2 : 1);
            break;
        }
    }
    std::vector<std::string> fail = verify_embedding(g, mutated, params);
    EXPECT_FALSE(fail.empty());
    bool mentions_restriction = false;
    for (const std::string& s : fail)
        if (s.find("restriction") != std::string::npos) mentions_restriction = true;
    EXPECT_TRUE(mentions_restriction);
}

TEST(Embed, TraceRecordsStages) {
    EmbedReport report =
        embed(hamembed::testing::k22_matchings(), hamembed::testing::k22_params(), 1);
    ASSERT_GE(report.trace.size(), 4u);
    EXPECT_NE(report.trace[0].find("G1"), std::string::npos);
}

namespace {

// Exhaustive count of extensions of g to a Hamiltonian decomposition of
// K(a^(p+r); lambda, mu): every coloring of the new edges is tried.
long count_extensions(const ColoredMultigraph& g, const GddParams& params) {
    ColoredMultigraph target = build_gdd(params, params.p + params.r);
    long k = params.k();
    std::vector<std::pair<VertexId, VertexId>> new_pairs;
    for (const Edge& e : target.edges())
        if (e.a.part > params.p || e.b.part > params.p) new_pairs.push_back({e.a, e.b});
    std::size_t m = new_pairs.size();

    long found = 0;
    std::vector<int> assign(m, 1);
    while (true) {
        ColoredMultigraph cand(static_cast<int>(k));
        for (const VertexId& v : target.vertices()) cand.add_vertex(v);
        for (const Edge& e : g.edges()) cand.add_edge(e.a, e.b, e.color);
        for (std::size_t i = 0; i < m; ++i)
            cand.add_edge(new_pairs[i].first, new_pairs[i].second, assign[i]);
        bool ham = true;
        for (int j = 1; j <= static_cast<int>(k) && ham; ++j) {
            ColoredMultigraph cls = cand.color_class(j);
            if (cls.components().count != 1) ham = false;
            for (const VertexId& v : cls.vertices())
                if (cls.degree(v) != 2) ham = false;
        }
        if (ham) ++found;
        std::size_t pos = 0;
        while (pos < m && assign[pos] == k) assign[pos++] = 1;
        if (pos == m) break;
        ++assign[pos];
    }
    return found;
}

}  // namespace

// The pipeline never answers "no" where exhaustive search finds an
// extension, and answers "yes" only where one exists.
TEST(Embed, AgreesWithExhaustiveSearchOnBoundaryFamily) {
    GddParams params = hamembed::testing::boundary_pair_params();
    for (int c1 = 1; c1 <= 2; ++c1) {
        for (int c2 = 1; c2 <= 2; ++c2) {
            ColoredMultigraph g(2);
            g.add_vertex(vid(1, 1));
            g.add_vertex(vid(1, 2));
            g.add_edge(vid(1, 1), vid(1, 2), c1);
            g.add_edge(vid(1, 1), vid(1, 2), c2);
            EmbedReport rep = embed(g, params, 3);
            long extensions = count_extensions(g, params);
            if (rep.verdict.embeddable == Verdict::Answer::yes) {
                EXPECT_GT(extensions, 0);
            }
            if (rep.verdict.embeddable == Verdict::Answer::no) {
                EXPECT_EQ(extensions, 0);
            }
        }
    }
}

// Exhaustive sweep of a triangle family: K(3^(1); 1, 2) with k = 4. A
// coloring is valid exactly when no class holds the whole triangle.
TEST(Embed, ExhaustiveTriangleFamily) {
    GddParams params{3, 1, 1, 2, 1};
    ASSERT_EQ(params.k(), 4);
    Enumeration all = enumerate_inputs(params);
    ASSERT_EQ(all.colorings.size(), 64u);
    int valid = 0;
    for (std::size_t i = 0; i < all.colorings.size(); ++i) {
        EmbedReport rep = embed(all.colorings[i], params, 9);
        if (all.verdicts[i].passed()) {
            ++valid;
            ASSERT_EQ(rep.verdict.embeddable, Verdict::Answer::yes);
            EXPECT_TRUE(verify_embedding(all.colorings[i], *rep.result, params).empty());
        } else {
            EXPECT_EQ(rep.verdict.embeddable, Verdict::Answer::no);
        }
    }
    EXPECT_EQ(valid, 60);  // 64 minus the four single-class triangles
}

// Every oracle-generated instance is accepted by a sufficiency regime and
// embeds into a verified decomposition.
TEST(Embed, GeneratedInstancesAlwaysEmbed) {
    int embedded = 0;
    for (int a = 2; a <= 3; ++a) {
        for (int p = 1; p <= 2; ++p) {
            for (int r = 1; r <= 2; ++r) {
                for (long lambda = 0; lambda <= 5; ++lambda) {
                    for (long mu = 1; mu <= 2; ++mu) {
                        if (lambda == mu) continue;
                        GddParams params{a, p, lambda, mu, r};
                        long d = lambda * (a - 1) + mu * a * (p + r - 1);
                        if (d % 2 != 0 || d / 2 > 9) continue;
                        EnumerationBudget budget;
                        budget.timeout = std::chrono::milliseconds(3000);
                        budget.max_nodes = 3'000'000;
                        GeneratedInput gen = generate_valid_input(params, 17, budget);
                        if (gen.status != OracleStatus::found) continue;
                        EmbedReport rep = embed(*gen.instance, params, 17);
                        ASSERT_NE(rep.verdict.embeddable, Verdict::Answer::no);
                        if (rep.verdict.embeddable == Verdict::Answer::yes) {
                            EXPECT_TRUE(
                                verify_embedding(*gen.instance, *rep.result, params).empty());
                            ++embedded;
                        }
                    }
                }
            }
        }
    }
    EXPECT_GE(embedded, 20);
}

TEST(Embed, AgreesWithExhaustiveSearchOnEmptyRadiusTwo) {
    GddParams params{2, 1, 0, 1, 2};
    ColoredMultigraph g = build_gdd(params, 1);
    g.set_max_color(static_cast<int>(params.k()));
    EmbedReport rep = embed(g, params, 3);
    ASSERT_EQ(rep.verdict.embeddable, Verdict::Answer::yes);
    EXPECT_TRUE(verify_embedding(g, *rep.result, params).empty());
    EXPECT_GT(count_extensions(g, params), 0);
}
