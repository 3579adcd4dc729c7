#include <gtest/gtest.h>

#include <random>

#include "chronoclust/chronometrics.hpp"
#include "chronoclust/error.hpp"
#include "chronoclust/gridnet.hpp"
#include "chronoclust/serialize.hpp"
#include "fixture.hpp"
#include "oracles.hpp"

using namespace chronoclust;

namespace {

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

// A in 1,2,4; B in 2,3; C nowhere.
MentionMatrix abc() {
  return MentionMatrix({"A", "B", "C"}, {"1", "2", "3", "4"}, {1, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0});
}

GridNetwork fixture_grid() {
  auto c = fixture::corpus();
  auto p = to_presence(c.matrix);
  return build_grid(p, p.document_ids(), p.entity_ids());
}

}  // namespace

TEST(Grid, TraceSkipsGaps) {
  auto g = build_grid(abc(), {"1", "2", "3", "4"}, {"A", "B", "C"});
  EXPECT_EQ(g.lane_order, (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(g.notes.size(), 1u);
  EXPECT_NE(g.notes[0].find("C"), std::string::npos);
  std::set<std::tuple<std::string, std::string, std::string>> want{{"A", "1", "2"}, {"A", "2", "4"}, {"B", "2", "3"}};
  EXPECT_EQ(g.edge_triples(), want);
  EXPECT_EQ(g.nodes.size(), 5u);
}

TEST(Grid, SinglePresence) {
  MentionMatrix m({"A"}, {"1", "2"}, {0, 1});
  auto g = build_grid(m, {"1", "2"}, {"A"});
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
}

TEST(Grid, EmptyColumnStaysOnAxis) {
  MentionMatrix m({"mv", "ia"}, {"M1", "M10"}, {1, 0, 1, 0});
  auto g = build_grid(m, {"M1", "M10"}, {"mv", "ia"});
  EXPECT_EQ(g.axis_order, (std::vector<std::string>{"M1", "M10"}));
  for (const auto& n : g.nodes) EXPECT_NE(g.axis_order[n.axis], "M10");
  EXPECT_NE(export_dot(g).find("subgraph \"axis_M10\" {\n    rank=same;\n  }"), std::string::npos);
}

TEST(Grid, Errors) {
  MentionMatrix counts({"A"}, {"1"}, {2});
  try {
    build_grid(counts, {"1"}, {"A"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonBinaryMatrix);
  }
  for (auto [axis, lanes] : std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>{
           {{"1", "9"}, {"A"}}, {{"1", "1"}, {"A"}}, {{"1"}, {"Z"}}, {{"1"}, {"A", "A"}}}) {
    try {
      build_grid(abc(), axis, lanes);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnknownAxisId);
    }
  }
}

TEST(Traces, Examples) {
  auto g = build_grid(abc(), {"1", "2", "3", "4"}, {"A", "B"});
  auto t = traces(g);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], (TraceSummary{"A", "1", "4", 3, 1, false}));
  EXPECT_EQ(t[1], (TraceSummary{"B", "2", "3", 2, 0, true}));

  std::vector<std::string> docs;
  for (int i = 1; i <= 10; ++i) docs.push_back("M" + std::to_string(i));
  MentionMatrix all({"C"}, docs, std::vector<std::int64_t>(10, 1));
  auto tc = traces(build_grid(all, docs, {"C"}));
  EXPECT_EQ(tc[0].presence_count, 10u);
  EXPECT_EQ(tc[0].gap_count, 0u);
  EXPECT_TRUE(tc[0].continuous);
}

TEST(Traces, FixtureByHand) {
  auto t = traces(fixture_grid());
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], (TraceSummary{"agni", "D1", "D2", 2, 0, true}));
  EXPECT_EQ(t[1], (TraceSummary{"indra", "D1", "D3", 3, 0, true}));
  EXPECT_EQ(t[2], (TraceSummary{"soma", "D2", "D4", 3, 0, true}));
}

TEST(Export, EmptyGrid) {
  GridNetwork g;
  EXPECT_EQ(export_dot(g), "graph grid {\n  node [shape=circle];\n}\n");
  auto gml = export_graphml(g);
  EXPECT_NE(gml.find("<graph id=\"grid\" edgedefault=\"undirected\">"), std::string::npos);
  EXPECT_EQ(count_of(gml, "<node "), 0u);
  EXPECT_NE(gml.find("</graphml>"), std::string::npos);
  auto svg = export_svg(g);
  EXPECT_NE(svg.find("<svg "), std::string::npos);
  EXPECT_EQ(count_of(svg, "<circle"), 0u);
}

TEST(Export, SingleNode) {
  MentionMatrix m({"agni"}, {"M1"}, {1});
  auto g = build_grid(m, {"M1"}, {"agni"});
  auto dot = export_dot(g);
  EXPECT_EQ(count_of(dot, "[label="), 1u);
  EXPECT_NE(dot.find("\"agni@M1\" [label=\"agni\"];"), std::string::npos);
  EXPECT_EQ(count_of(export_graphml(g), "<node "), 1u);
  auto svg = export_svg(g);
  EXPECT_EQ(count_of(svg, "<circle"), 1u);
  EXPECT_NE(svg.find(">agni</text>"), std::string::npos);
}

TEST(Export, FixtureGoldens) {
  auto g = fixture_grid();
  EXPECT_EQ(export_dot(g), fixture::golden("fixture_grid.dot"));
  EXPECT_EQ(export_graphml(g), fixture::golden("fixture_grid.graphml"));
  EXPECT_EQ(export_svg(g), fixture::golden("fixture_grid.svg"));
}

TEST(Export, Deterministic) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    auto m = oracle::random_binary(rng, 5, 6);
    auto g1 = build_grid(m, m.document_ids(), m.entity_ids());
    auto g2 = build_grid(m, m.document_ids(), m.entity_ids());
    EXPECT_EQ(export_dot(g1), export_dot(g2));
    EXPECT_EQ(export_graphml(g1), export_graphml(g2));
    EXPECT_EQ(export_svg(g1), export_svg(g2));
  }
}

TEST(Export, XmlEscaping) {
  MentionMatrix m({"a<b"}, {"d&1", "d2"}, {1, 1});
  auto g = build_grid(m, {"d&1", "d2"}, {"a<b"});
  auto gml = export_graphml(g);
  EXPECT_NE(gml.find("a&lt;b"), std::string::npos);
  EXPECT_EQ(gml.find("a<b"), std::string::npos);
  EXPECT_NE(export_svg(g).find("d&amp;1"), std::string::npos);
}

TEST(Style, FromJson) {
  auto s = StyleOptions::from_json(R"({"cell_width": 50, "node_fill": "#000", "lanes_as_columns": true})");
  EXPECT_EQ(s.cell_width, 50.0);
  EXPECT_EQ(s.node_fill, "#000");
  EXPECT_TRUE(s.lanes_as_columns);
  EXPECT_EQ(s.cell_height, StyleOptions{}.cell_height);
  for (const char* bad : {"{\"nope\": 1}", "[1]", "{\"cell_width\": \"x\"}", "{\"cell_width\": -1}", "{"}) {
    try {
      StyleOptions::from_json(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadConfig);
    }
  }
}

TEST(Style, LanesAsColumnsSwapsCanvas) {
  auto g = fixture_grid();
  StyleOptions s;
  s.lanes_as_columns = true;
  auto svg = export_svg(g, s);
  // 3 lanes across, 4 axis positions down.
  EXPECT_NE(svg.find("width=\"" + std::to_string(24 + 120 + 3 * 80 + 24) + "\""), std::string::npos);
  EXPECT_NE(svg.find("height=\"" + std::to_string(24 + 32 + 4 * 36 + 24) + "\""), std::string::npos);
}

TEST(Persistence, FixtureGolden) {
  auto g = fixture_grid();
  auto report = persistence_report(traces(g), g.axis_order);
  EXPECT_EQ(to_json(report), fixture::golden("fixture_persistence.json"));
  // By hand: agni and indra first appear in D1, soma in D2; nobody spans D1..D4.
  EXPECT_EQ(report.first_appearance,
            (std::vector<std::pair<std::string, std::size_t>>{{"D1", 2}, {"D2", 1}, {"D3", 0}, {"D4", 0}}));
  EXPECT_EQ(report.continuous_count, 3u);
  EXPECT_TRUE(report.constants.empty());
}

TEST(Persistence, AllEverywhere) {
  MentionMatrix m({"a", "b"}, {"1", "2", "3"}, std::vector<std::int64_t>(6, 1));
  auto g = build_grid(m, m.document_ids(), m.entity_ids());
  auto r = persistence_report(traces(g), g.axis_order);
  EXPECT_EQ(r.fraction_continuous, 1.0);
  EXPECT_EQ(r.constants, (std::vector<std::string>{"a", "b"}));
}

TEST(Persistence, LateComer) {
  MentionMatrix m({"a", "late"}, {"1", "2", "3"}, {1, 1, 1, 0, 0, 1});
  auto g = build_grid(m, m.document_ids(), m.entity_ids());
  auto r = persistence_report(traces(g), g.axis_order);
  EXPECT_EQ(r.first_appearance.back(), (std::pair<std::string, std::size_t>{"3", 1}));
  EXPECT_EQ(r.constants, (std::vector<std::string>{"a"}));
}
