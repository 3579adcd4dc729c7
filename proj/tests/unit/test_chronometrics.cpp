#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chronoclust/chronometrics.hpp"
#include "chronoclust/error.hpp"
#include "oracles.hpp"

using namespace chronoclust;

namespace {

using Labels = std::vector<std::size_t>;

ChronologyReference stages_of(const std::vector<std::pair<std::string, std::string>>& docs,
                              const std::vector<std::string>& stages) {
  ChronologyReference ref;
  ref.name = "test";
  ref.stages = stages;
  int rank = 0;
  for (const auto& s : stages) {
    for (const auto& [d, st] : docs) {
      if (st == s) ref.assignment[d] = {st, ++rank};
    }
  }
  return ref;
}

Corpus river_corpus(const std::vector<int>& ranks, const std::vector<std::vector<int>>& presences) {
  // presences[d] lists geo ordinals present in document d.
  Corpus c;
  c.chronology.name = "test";
  c.chronology.stages = {"all"};
  std::vector<std::string> rivers;
  for (int o = 1; o <= 9; ++o) {
    std::string id = "r" + std::to_string(o);
    c.entities.push_back({id, id, Category::River, {}, o, ""});
    rivers.push_back(id);
  }
  std::vector<std::string> docs;
  for (std::size_t d = 0; d < ranks.size(); ++d) {
    docs.push_back("d" + std::to_string(d));
    c.chronology.assignment[docs.back()] = {"all", ranks[d]};
  }
  std::vector<std::int64_t> counts(rivers.size() * docs.size(), 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (int o : presences[d]) counts[static_cast<std::size_t>(o - 1) * docs.size() + d] = 1;
  }
  c.matrix = MentionMatrix(rivers, docs, counts);
  return c;
}

}  // namespace

TEST(Ari, IdentityAndDegenerate) {
  Labels a{0, 0, 1, 1, 2};
  EXPECT_EQ(adjusted_rand_index(a, a), 1.0);
  EXPECT_EQ(adjusted_rand_index(a, Labels{5, 5, 9, 9, 7}), 1.0);
  Labels one{0, 0, 0, 0, 0};
  EXPECT_EQ(adjusted_rand_index(one, a), 0.0);
  EXPECT_EQ(adjusted_rand_index(one, one), 1.0);
  Labels singles{0, 1, 2, 3, 4};
  EXPECT_EQ(adjusted_rand_index(singles, singles), 1.0);
  EXPECT_EQ(adjusted_rand_index(singles, one), 0.0);
  EXPECT_THROW(adjusted_rand_index(a, Labels{0, 1}), Error);
}

TEST(Ari, MatchesPairCountOracle) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 2 + t % 12;
    std::uniform_int_distribution<std::size_t> la(0, 1 + t % 4), lb(0, 1 + t % 3);
    Labels x(n), y(n);
    for (auto& v : x) v = la(rng);
    for (auto& v : y) v = lb(rng);
    double want = oracle::pair_count_ari(x, y);
    double got = adjusted_rand_index(x, y);
    if (std::isfinite(want)) EXPECT_NEAR(got, want, 1e-12) << t;
    EXPECT_NEAR(got, adjusted_rand_index(y, x), 1e-12);
  }
}

TEST(Concordance, IdentityPartition) {
  auto ref = stages_of({{"a", "s1"}, {"b", "s1"}, {"c", "s2"}}, {"s1", "s2"});
  FlatClustering flat{{{"c"}, {"a", "b"}}, ClusterOrigin::Cut, {}};
  auto r = concordance(flat, ref);
  EXPECT_EQ(r.adjusted_rand, 1.0);
  EXPECT_EQ(*r.same_stage_cocluster_rate, 1.0);
  EXPECT_EQ(*r.cross_stage_cocluster_rate, 0.0);
}

TEST(Concordance, OneCluster) {
  auto ref = stages_of({{"a", "s1"}, {"b", "s1"}, {"c", "s2"}, {"d", "s3"}}, {"s1", "s2", "s3"});
  FlatClustering flat{{{"a", "b", "c", "d"}}, ClusterOrigin::Cut, {}};
  auto r = concordance(flat, ref);
  EXPECT_EQ(r.adjusted_rand, 0.0);
  EXPECT_EQ(*r.same_stage_cocluster_rate, 1.0);
}

TEST(Concordance, MissingStage) {
  auto ref = stages_of({{"a", "s1"}}, {"s1"});
  FlatClustering flat{{{"a", "b"}}, ClusterOrigin::Cut, {}};
  try {
    concordance(flat, ref);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingStage);
  }
}

TEST(Concordance, MandalaKMeansPartitionAgainstBuiltinStages) {
  auto ref = builtin_chronology();
  FlatClustering flat{{{"M6", "M3", "M7", "M2"}, {"M1", "M5", "M9", "M10"}, {"M4", "M8"}}, ClusterOrigin::KMeans, {}};
  auto r = concordance(flat, ref);
  // Independent pair-count computation over the same ten documents.
  std::vector<std::string> docs{"M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10"};
  Labels x, y;
  for (const auto& d : docs) {
    x.push_back(*flat.cluster_of(d));
    y.push_back(*ref.stage_position(ref.find(d)->stage));
  }
  EXPECT_NEAR(r.adjusted_rand, oracle::pair_count_ari(x, y), 1e-12);
  EXPECT_NEAR(r.adjusted_rand, 446.0 / 851.0, 1e-12);
  ASSERT_EQ(r.per_stage.size(), 3u);
  EXPECT_EQ(r.per_stage[0].stage, "early");
  EXPECT_TRUE(r.per_stage[0].fully_coclustered);
  EXPECT_FALSE(r.per_stage[1].fully_coclustered);
  EXPECT_EQ(r.per_stage[2].clusters_spanned, 2u);
  EXPECT_EQ(r.n_documents, 10u);
}

TEST(Spearman, WorkedExample) {
  std::vector<double> ranks{1, 2, 3, 4}, means{2.0, 1.0, 3.0, 4.0};
  EXPECT_NEAR(spearman(ranks, means), 0.8, 1e-12);
  EXPECT_NEAR(oracle::spearman_no_ties(ranks, means), 0.8, 1e-12);
}

TEST(Spearman, MonotoneAndReversed) {
  std::vector<double> x{1, 2, 3, 4, 5}, up{0.1, 0.5, 2, 9, 10}, down{5, 4, 3, 2, 1};
  EXPECT_EQ(spearman(x, up), 1.0);
  EXPECT_EQ(spearman(x, down), -1.0);
}

TEST(Spearman, TiesUseAverageRanks) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 30}), (std::vector<double>{1, 2.5, 2.5, 4}));
  std::vector<double> x{1, 2, 3, 4}, y{1, 2, 2, 3};
  // Ranks (1,2,3,4) vs (1,2.5,2.5,4): sxy = 4.5, sxx = 5, syy = 4.5.
  EXPECT_NEAR(spearman(x, y), 4.5 / std::sqrt(5 * 4.5), 1e-15);
}

TEST(Spearman, Insufficient) {
  for (auto [x, y] : std::vector<std::pair<std::vector<double>, std::vector<double>>>{
           {{1, 2}, {1, 2}}, {{1, 1, 1}, {1, 2, 3}}, {{1, 2, 3}, {4, 4, 4}}}) {
    try {
      spearman(x, y);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InsufficientDocuments);
    }
  }
}

TEST(Spearman, MatchesNoTieFormula) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 3 + t % 15;
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    EXPECT_NEAR(spearman(x, y), oracle::spearman_no_ties(x, y), 1e-12);
    std::vector<double> cubed(n);
    for (std::size_t i = 0; i < n; ++i) cubed[i] = std::exp(3 * y[i]);
    EXPECT_NEAR(spearman(x, cubed), spearman(x, y), 1e-12);
  }
}

TEST(Progression, MonotoneCorpus) {
  // Later documents sit further west (lower ordinals).
  auto c = river_corpus({1, 2, 3, 4}, {{8, 9}, {6, 7}, {4, 5}, {1, 2}});
  auto r = geo_progression(c, c.matrix);
  EXPECT_EQ(r.spearman_rho, -1.0);
  EXPECT_EQ(r.documents.front().mean_geo_ordinal, 8.5);
  auto forward = river_corpus({4, 3, 2, 1}, {{8, 9}, {6, 7}, {4, 5}, {1, 2}});
  EXPECT_EQ(geo_progression(forward, forward.matrix).spearman_rho, 1.0);
}

TEST(Progression, WorkedExample) {
  // Means (2, 1, 3, 4) at ranks (1, 2, 3, 4).
  auto c = river_corpus({1, 2, 3, 4}, {{1, 3}, {1}, {3}, {4}});
  auto r = geo_progression(c, c.matrix);
  EXPECT_NEAR(r.spearman_rho, 0.8, 1e-12);
}

TEST(Progression, PresenceIgnoresMagnitudes) {
  auto c = river_corpus({1, 2, 3}, {{1, 9}, {2}, {5, 6}});
  auto base = geo_progression(c, c.matrix).spearman_rho;
  auto counts = c.matrix.counts();
  for (auto& x : counts) x *= 7;
  counts[0] = 40;  // r1 in d0 now dominates by count
  c.matrix = MentionMatrix(c.matrix.entity_ids(), c.matrix.document_ids(), counts);
  EXPECT_EQ(geo_progression(c, c.matrix).spearman_rho, base);
  EXPECT_NE(geo_progression(c, c.matrix, GeoWeighting::Counts).documents[0].mean_geo_ordinal,
            geo_progression(c, c.matrix).documents[0].mean_geo_ordinal);
}

TEST(Progression, SkipsAndErrors) {
  auto c = river_corpus({1, 2, 3, 4}, {{1}, {2}, {}, {4}});
  c.chronology.assignment.erase("d3");
  try {
    geo_progression(c, c.matrix);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientDocuments);
  }
  Corpus none;
  none.entities.push_back({"agni", "Agni", Category::Single, {}, std::nullopt, ""});
  none.matrix = MentionMatrix({"agni"}, {"x"}, {1});
  try {
    geo_progression(none, none.matrix);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoRivers);
  }
}
