#include "hamembed/io.hpp"

#include <gtest/gtest.h>

#include "hamembed/pipeline.hpp"
#include "test_support.hpp"

using namespace hamembed;

namespace {

const char* kMinimalK22 = R"({
  "params": {"a": 2, "p": 2, "lambda": 0, "mu": 1, "r": 1},
  "edges": [
    {"from": "p1.v1", "to": "p2.v1", "color": 1},
    {"from": "p1.v2", "to": "p2.v2", "color": 1},
    {"from": "p1.v1", "to": "p2.v2", "color": 2},
    {"from": "p1.v2", "to": "p2.v1", "color": 2}
  ]
})";

}  // namespace

TEST(ParseInstance, MinimalValidFile) {
    Instance inst = parse_instance(kMinimalK22);
    EXPECT_EQ(inst.params.k(), 2);
    EXPECT_EQ(inst.graph.edge_count(), 4u);
    EXPECT_EQ(inst.graph.max_color(), 2);
    EXPECT_TRUE(check_main_conditions(inst.graph, inst.params).passed());
}

TEST(ParseInstance, LambdaEqualsMuRejected) {
    const char* text = R"({"params": {"a": 2, "p": 2, "lambda": 1, "mu": 1, "r": 1}, "edges": []})";
    try {
        parse_instance(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseCode::lambda_equals_mu);
    }
}

TEST(ParseInstance, ExtraEdgeIsMultiplicityMismatch) {
    std::string text = R"({
      "params": {"a": 2, "p": 2, "lambda": 0, "mu": 1, "r": 1},
      "edges": [
        {"from": "p1.v1", "to": "p2.v1", "color": 1},
        {"from": "p1.v1", "to": "p2.v1", "color": 2},
        {"from": "p1.v2", "to": "p2.v2", "color": 1},
        {"from": "p1.v1", "to": "p2.v2", "color": 2},
        {"from": "p1.v2", "to": "p2.v1", "color": 2}
      ]
    })";
    try {
        parse_instance(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseCode::multiplicity_mismatch);
    }
}

TEST(ParseInstance, UnknownVertexName) {
    const char* text = R"({
      "params": {"a": 2, "p": 2, "lambda": 0, "mu": 1, "r": 1},
      "edges": [{"from": "p3.v1", "to": "p1.v1", "color": 1}]
    })";
    try {
        parse_instance(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseCode::unknown_vertex);
    }
}

TEST(ParseInstance, ColorOutOfRange) {
    const char* text = R"({
      "params": {"a": 2, "p": 2, "lambda": 0, "mu": 1, "r": 1},
      "edges": [{"from": "p1.v1", "to": "p2.v1", "color": 3}]
    })";
    try {
        parse_instance(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseCode::color_out_of_range);
    }
}

TEST(ParseInstance, MalformedJson) {
    try {
        parse_instance("{nope");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseCode::schema_violation);
    }
}

TEST(Serialize, RoundTripIsCanonical) {
    Instance inst = parse_instance(kMinimalK22);
    std::string once = serialize_instance(inst.params, inst.graph);
    Instance again = parse_instance(once);
    EXPECT_EQ(again.graph, inst.graph);
    std::string twice = serialize_instance(again.params, again.graph);
    EXPECT_EQ(once, twice);  // canonicalization is idempotent
}

TEST(SerializeResult, NoVerdictListsViolations) {
    EmbedReport report;
    report.verdict.embeddable = Verdict::Answer::no;
    report.verdict.violated = {"thm1.2.iv"};
    report.regime = RegimeTag::UnitR;
    std::string text = serialize_result(report, hamembed::testing::k22_params());
    EXPECT_NE(text.find("\"verdict\": \"no\""), std::string::npos);
    EXPECT_NE(text.find("thm1.2.iv"), std::string::npos);
}

TEST(SerializeResult, YesVerdictCarriesCyclesOverAllParts) {
    GddParams params = hamembed::testing::k22_params();
    ColoredMultigraph g = hamembed::testing::k22_matchings();
    EmbedReport report = embed(g, params, 1);
    std::string text = serialize_result(report, params);
    EXPECT_NE(text.find("\"verdict\": \"yes\""), std::string::npos);
    EXPECT_NE(text.find("\"parts\": 3"), std::string::npos);
    EXPECT_NE(text.find("p3.v1"), std::string::npos);  // vertices of the added part
    nlohmann::json j = nlohmann::json::parse(text);
    ASSERT_EQ(j["result"]["cycles"].size(), 2u);
    for (const auto& cyc : j["result"]["cycles"])
        EXPECT_EQ(cyc["vertices"].size(), 6u);
}

TEST(SerializeResult, UndeterminedCarriesRegime) {
    EmbedReport report;
    report.verdict.embeddable = Verdict::Answer::undetermined;
    report.regime = RegimeTag::Undetermined;
    std::string text = serialize_result(report, hamembed::testing::k22_params());
    EXPECT_NE(text.find("\"verdict\": \"undetermined\""), std::string::npos);
    EXPECT_NE(text.find("\"regime\": \"undetermined\""), std::string::npos);
}

TEST(ResultFile, ParsesBackForVerification) {
    GddParams params = hamembed::testing::k22_params();
    ColoredMultigraph g = hamembed::testing::k22_matchings();
    EmbedReport report = embed(g, params, 1);
    std::string text = serialize_result(report, params);
    ColoredMultigraph parsed = parse_result_graph(text, params);
    EXPECT_TRUE(verify_embedding(g, parsed, params).empty());
}
