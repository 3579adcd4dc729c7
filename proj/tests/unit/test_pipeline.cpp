#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "chronoclust/error.hpp"
#include "chronoclust/pipeline.hpp"
#include "fixture.hpp"
#include "oracles.hpp"
#include "json.hpp"

using namespace chronoclust;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

Json read_json(const fs::path& p) { return Json::parse(fixture::slurp(p)); }

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

std::set<std::string> names(const CommandResult& r) {
  std::set<std::string> out;
  for (const auto& p : r.written) out.insert(p.filename().string());
  return out;
}

}  // namespace

TEST(Pipeline, ValidateFixture) {
  auto r = cmd_validate(fixture::config(fixture::scratch("validate")));
  EXPECT_EQ(r.exit_code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("3 entities, 4 documents"), std::string::npos) << r.out;
  EXPECT_TRUE(r.written.empty());
}

TEST(Pipeline, ExitCodes) {
  auto out = fixture::scratch("exit");
  auto missing = fixture::config(out);
  missing.mentions = out / "nope.csv";
  auto r = cmd_validate(missing);
  EXPECT_EQ(r.exit_code, kExitIo);
  EXPECT_NE(r.err.find("Io"), std::string::npos) << r.err;

  auto bad_k = fixture::config(out);
  bad_k.k = 9;
  EXPECT_EQ(cmd_cluster(bad_k).exit_code, kExitDomain);

  auto unknown = fixture::config(out);
  unknown.exclude_docs = {"D9"};
  auto u = cmd_grid(unknown);
  EXPECT_EQ(u.exit_code, kExitDomain);
  EXPECT_NE(u.err.find("UnknownDocument"), std::string::npos) << u.err;

  auto broken = fixture::config(out);
  write_text(out / "mentions.csv", "entity_id,document_id,count\nagni,D1,-1\nzeus,D1,1\n");
  broken.mentions = out / "mentions.csv";
  auto b = cmd_validate(broken);
  EXPECT_EQ(b.exit_code, kExitDomain);
  // Every issue is listed, not only the first.
  EXPECT_NE(b.err.find("NegativeCount"), std::string::npos) << b.err;
  EXPECT_NE(b.err.find("UnknownReference"), std::string::npos) << b.err;
}

TEST(Pipeline, ClusterWritesArtifacts) {
  auto out = fixture::scratch("cluster");
  auto cfg = fixture::config(out);
  auto r = cmd_cluster(cfg);
  ASSERT_EQ(r.exit_code, kExitOk) << r.err;
  EXPECT_EQ(names(r), (std::set<std::string>{"similarity.csv", "similarity.json", "dendrogram.nwk",
                                             "dendrogram.json", "clusters.json"}));
  EXPECT_NE(r.out.find("{D1} {D2,D3,D4}"), std::string::npos) << r.out;
  auto clusters = read_json(out / "clusters.json");
  EXPECT_EQ(clusters["clusters"], Json::parse(R"([["D1"],["D2","D3","D4"]])"));

  auto km_out = fixture::scratch("cluster_km");
  auto km = fixture::config(km_out);
  km.algo = Algorithm::KMeans;
  km.formats = {"json"};
  auto rk = cmd_cluster(km);
  ASSERT_EQ(rk.exit_code, kExitOk) << rk.err;
  EXPECT_EQ(names(rk), (std::set<std::string>{"similarity.json", "kmeans.json", "clusters.json"}));
  EXPECT_EQ(read_json(km_out / "clusters.json")["clusters"], Json::parse(R"([["D1","D2"],["D3","D4"]])"));
}

TEST(Pipeline, GridMatchesGoldens) {
  auto out = fixture::scratch("grid");
  auto r = cmd_grid(fixture::config(out));
  ASSERT_EQ(r.exit_code, kExitOk) << r.err;
  EXPECT_EQ(fixture::slurp(out / "grid.dot"), fixture::golden("fixture_grid.dot"));
  EXPECT_EQ(fixture::slurp(out / "grid.graphml"), fixture::golden("fixture_grid.graphml"));
  EXPECT_EQ(fixture::slurp(out / "grid.svg"), fixture::golden("fixture_grid.svg"));
  EXPECT_EQ(fixture::slurp(out / "persistence.json"), fixture::golden("fixture_persistence.json"));
  EXPECT_NE(r.out.find("8 nodes, 5 edges"), std::string::npos) << r.out;
}

TEST(Pipeline, ReportIsDeterministic) {
  auto a = fixture::scratch("report_a");
  auto b = fixture::scratch("report_b");
  auto ra = cmd_report(fixture::config(a));
  auto rb = cmd_report(fixture::config(b));
  ASSERT_EQ(ra.exit_code, kExitOk) << ra.err;
  ASSERT_EQ(names(ra), names(rb));
  for (const auto& name : names(ra)) EXPECT_EQ(fixture::slurp(a / name), fixture::slurp(b / name)) << name;
  auto report = read_json(a / "report.json");
  EXPECT_EQ(report["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(report["seed"], kDefaultSeed);
  EXPECT_TRUE(report["progression"].contains("skipped"));
  EXPECT_TRUE(report["reference_checks"].empty());
  EXPECT_EQ(report["concordance"]["reference"], "documents.csv");
}

TEST(Pipeline, SeedOnlyTouchesSeedAndKMeans) {
  auto a = fixture::scratch("seed_a");
  auto b = fixture::scratch("seed_b");
  auto ca = fixture::config(a);
  auto cb = fixture::config(b);
  cb.seed = 1;
  ASSERT_EQ(cmd_report(ca).exit_code, kExitOk);
  ASSERT_EQ(cmd_report(cb).exit_code, kExitOk);
  auto ja = read_json(a / "report.json");
  auto jb = read_json(b / "report.json");
  EXPECT_EQ(ja["config_hash"], jb["config_hash"]);
  EXPECT_NE(ja["seed"], jb["seed"]);
  for (const auto& [key, value] : ja.items()) {
    if (key == "seed" || key == "kmeans" || key == "concordance") continue;
    EXPECT_EQ(value, jb[key]) << key;
  }
  EXPECT_EQ(ja["concordance"]["agglomerative"], jb["concordance"]["agglomerative"]);
}

TEST(Pipeline, HashTracksInputs) {
  auto out = fixture::scratch("hash");
  auto base = fixture::config(out);
  auto h = config_hash(base);
  auto k = base;
  k.k = 3;
  EXPECT_NE(config_hash(k), h);
  write_text(out / "mentions.csv", fixture::slurp(base.mentions) + "\n");
  auto edited = base;
  edited.mentions = out / "mentions.csv";
  EXPECT_NE(config_hash(edited), h);
  write_text(out / "chronology.csv", "document_id,stage,rank\nD1,a,1\nD2,a,2\nD3,b,3\nD4,b,4\n");
  auto chron = base;
  chron.chronology = out / "chronology.csv";
  EXPECT_NE(config_hash(chron), h);
}

TEST(Pipeline, FormatsFilter) {
  auto out = fixture::scratch("formats");
  auto cfg = fixture::config(out);
  cfg.formats = {"svg"};
  auto r = cmd_report(cfg);
  ASSERT_EQ(r.exit_code, kExitOk) << r.err;
  EXPECT_EQ(names(r), (std::set<std::string>{"grid.svg"}));
}

TEST(Pipeline, ChronologyOverrideAndAxis) {
  auto out = fixture::scratch("override");
  write_text(out / "chronology.csv", "document_id,stage,rank\nD4,a,1\nD3,a,2\nD2,b,3\nD1,b,4\n");
  auto cfg = fixture::config(out);
  cfg.chronology = out / "chronology.csv";
  auto corpus = load_corpus(cfg);
  EXPECT_EQ(grid_axis(corpus, corpus.matrix, AxisKind::Chronology),
            (std::vector<std::string>{"D4", "D3", "D2", "D1"}));
  EXPECT_EQ(grid_axis(corpus, corpus.matrix, AxisKind::Index), (std::vector<std::string>{"D1", "D2", "D3", "D4"}));
  ASSERT_EQ(cmd_report(cfg).exit_code, kExitOk);
  EXPECT_EQ(read_json(out / "report.json")["concordance"]["reference"], "chronology.csv");
}

TEST(Pipeline, FamilySlice) {
  auto cfg = fixture::config(fixture::scratch("family"));
  cfg.family_only = true;
  auto sliced = apply_slice(load_corpus(cfg), cfg);
  EXPECT_EQ(sliced.matrix.document_ids(), (std::vector<std::string>{"D2", "D3"}));
}

TEST(Pipeline, SampleReport) {
  auto out = fixture::scratch("sample");
  auto cfg = load_config(fixture::source_dir() / "data" / "sample" / "run.toml");
  cfg.out_dir = out;
  auto r = cmd_report(cfg);
  ASSERT_EQ(r.exit_code, kExitOk) << r.err;
  auto report = read_json(out / "report.json");
  EXPECT_FALSE(report["progression"].contains("skipped"));
  EXPECT_TRUE(report["reference_checks"].contains("m1_m5_cocluster"));
  EXPECT_EQ(report["corpus"]["chronology"], "documents.csv");
}

TEST(Pipeline, SkeletonFailsValidation) {
  auto cfg = fixture::config(fixture::scratch("skeleton"));
  auto dir = fixture::source_dir() / "data" / "rigveda-skeleton";
  cfg.entities = dir / "entities.csv";
  cfg.documents = dir / "documents.csv";
  cfg.mentions = dir / "mentions.csv";
  auto r = cmd_validate(cfg);
  EXPECT_EQ(r.exit_code, kExitDomain);
  EXPECT_NE(r.err.find("EmptyDocument"), std::string::npos) << r.err;
}

TEST(Partitions, Helpers) {
  EXPECT_TRUE(same_partition({{"a", "b"}, {"c"}}, {{"c"}, {"b", "a"}}));
  EXPECT_FALSE(same_partition({{"a", "b"}, {"c"}}, {{"a"}, {"b", "c"}}));
  EXPECT_EQ(partition_ari({{"a", "b"}, {"c"}}, {{"c"}, {"b", "a"}}), 1.0);
  try {
    partition_ari({{"a"}}, {{"b"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PartitionMismatch);
  }
  auto ref = reference_river_partition();
  ASSERT_EQ(ref.size(), 3u);
  EXPECT_EQ(ref[0].size() + ref[1].size() + ref[2].size(), 10u);
}

TEST(Partitions, KMeansSearchFindsPlantedPartition) {
  // Three document groups with disjoint entity supports.
  std::vector<std::string> docs{"a1", "a2", "b1", "b2", "b3", "c1"};
  std::vector<std::string> ents{"x", "y", "z"};
  MentionMatrix m(ents, docs, {5, 4, 0, 0, 0, 0, 0, 0, 3, 4, 5, 0, 0, 0, 0, 0, 0, 2});
  std::vector<std::vector<std::string>> target{{"a1", "a2"}, {"b1", "b2", "b3"}, {"c1"}};
  KMeansOptions o;
  o.restarts = 5;
  auto s = search_kmeans_partition(m, target, o);
  EXPECT_EQ(s.attempts.size(), 6u);
  EXPECT_TRUE(s.exact());
  EXPECT_EQ(s.attempts[s.best].ari, 1.0);
}

TEST(Partitions, CoclusterSearch) {
  MentionMatrix m({"x", "y"}, {"p", "q", "r", "s"}, {5, 4, 0, 1, 0, 1, 5, 4});
  auto s = search_cocluster(m, "p", "q");
  EXPECT_TRUE(s.found());
  EXPECT_EQ(s.attempts.size(), 3u * 3u);  // k = 2..4 per linkage
  auto apart = search_cocluster(m, "p", "s", 3, 4);
  EXPECT_FALSE(apart.found());
  EXPECT_GT(apart.attempts[apart.best].removal, 0u);
}
