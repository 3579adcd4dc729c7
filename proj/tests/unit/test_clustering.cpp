#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "chronoclust/clustering.hpp"
#include "chronoclust/error.hpp"
#include "chronoclust/similarity.hpp"
#include "fixture.hpp"
#include "oracles.hpp"

using namespace chronoclust;

namespace {

DistanceMatrix fixture_distance() { return to_distance(similarity_matrix(fixture::corpus().matrix)); }

// Average-linkage heights for the fixture, from the raw cosines:
// d23 = 1 - 6/sqrt(48); d(23,4) = mean(1 - 1/sqrt(6), 1 - 6/sqrt(72));
// d(234,1) = mean(1 - 4/sqrt(30), 1 - 2/sqrt(40), 1).
double h1() { return 1.0 - 6.0 / std::sqrt(48.0); }
double h2() { return ((1.0 - 1.0 / std::sqrt(6.0)) + (1.0 - 6.0 / std::sqrt(72.0))) / 2.0; }
double h3() { return ((1.0 - 4.0 / std::sqrt(30.0)) + (1.0 - 2.0 / std::sqrt(40.0)) + 1.0) / 3.0; }

}  // namespace

TEST(Agglomerate, FixtureAverageLinkage) {
  auto d = agglomerate(fixture_distance(), Linkage::Average);
  ASSERT_EQ(d.merges().size(), 3u);
  // Leaves 0..3 are D1..D4; node 4 = first merge.
  EXPECT_EQ(d.merges()[0].left, 1u);
  EXPECT_EQ(d.merges()[0].right, 2u);
  EXPECT_NEAR(d.merges()[0].height, h1(), 1e-15);
  EXPECT_NEAR(d.merges()[0].height, 0.134, 5e-4);
  EXPECT_EQ(d.merges()[1].left, 4u);
  EXPECT_EQ(d.merges()[1].right, 3u);
  EXPECT_NEAR(d.merges()[1].height, h2(), 1e-15);
  EXPECT_NEAR(d.merges()[1].height, 0.442, 5e-4);
  EXPECT_EQ(d.merges()[2].left, 0u);
  EXPECT_EQ(d.merges()[2].right, 5u);
  EXPECT_NEAR(d.merges()[2].height, h3(), 1e-15);
  EXPECT_NEAR(d.merges()[2].height, 0.651, 5e-4);
  EXPECT_EQ(d.merges()[2].size, 4u);
}

TEST(Agglomerate, FixtureMatchesOracleForAllLinkages) {
  auto dist = fixture_distance();
  for (auto l : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
    auto got = clades(agglomerate(dist, l));
    auto want = oracle::naive_agglomerate(dist, l);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [set, h] : want) {
      ASSERT_TRUE(got.count(set)) << to_string(l);
      EXPECT_NEAR(got.at(set), h, 1e-12);
    }
  }
}

TEST(Agglomerate, TwoLeaves) {
  auto d = agglomerate(make_distance({"A", "B"}, {0, 0.4, 0.4, 0}), Linkage::Single);
  ASSERT_EQ(d.merges().size(), 1u);
  EXPECT_EQ(d.merges()[0], (Merge{0, 1, 0.4, 2}));
}

TEST(Agglomerate, EquidistantTieBreak) {
  auto dist = make_distance({"A", "B", "C"}, {0, .5, .5, .5, 0, .5, .5, .5, 0});
  for (auto l : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
    auto d = agglomerate(dist, l);
    EXPECT_EQ(d.merges()[0], (Merge{0, 1, 0.5, 2}));
    EXPECT_EQ(d.merges()[1], (Merge{3, 2, 0.5, 3}));
  }
}

TEST(Agglomerate, TooFewDocuments) {
  try {
    agglomerate(make_distance({"A"}, {0}), Linkage::Average);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewDocuments);
  }
}

TEST(Agglomerate, HeightsNondecreasingAndLeftChildHasSmallerLeaf) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto dist = oracle::random_distance(rng, 3 + t % 6);
    for (auto l : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
      auto d = agglomerate(dist, l);
      for (std::size_t i = 1; i < d.merges().size(); ++i) {
        EXPECT_LE(d.merges()[i - 1].height, d.merges()[i].height);
      }
      for (const auto& m : d.merges()) {
        auto lm = d.members(m.left);
        auto rm = d.members(m.right);
        EXPECT_LT(*std::min_element(lm.begin(), lm.end()), *std::min_element(rm.begin(), rm.end()));
      }
    }
  }
}

TEST(Dendrogram, RejectsInvalidMergeLists) {
  std::vector<std::string> leaves{"a", "b", "c"};
  EXPECT_THROW(Dendrogram(leaves, {{0, 1, 0.1, 2}}), Error);                    // too few merges
  EXPECT_THROW(Dendrogram(leaves, {{0, 1, 0.1, 2}, {0, 2, 0.2, 2}}), Error);    // leaf reused
  EXPECT_THROW(Dendrogram(leaves, {{0, 4, 0.1, 2}, {1, 2, 0.2, 2}}), Error);    // forward reference
  EXPECT_THROW(Dendrogram(leaves, {{0, 1, 0.3, 2}, {3, 2, 0.2, 3}}), Error);    // height decreases
  EXPECT_NO_THROW(Dendrogram(leaves, {{0, 1, 0.1, 2}, {3, 2, 0.2, 3}}));
}

TEST(Cut, Extremes) {
  auto d = agglomerate(fixture_distance(), Linkage::Average);
  auto one = cut(d, 1);
  ASSERT_EQ(one.clusters.size(), 1u);
  EXPECT_EQ(one.clusters[0], (std::vector<std::string>{"D1", "D2", "D3", "D4"}));
  auto all = cut(d, 4);
  EXPECT_EQ(all.clusters.size(), 4u);
  for (const auto& c : all.clusters) EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(all.origin, ClusterOrigin::Cut);
}

TEST(Cut, FixtureTwoClusters) {
  auto flat = cut(agglomerate(fixture_distance(), Linkage::Average), 2);
  EXPECT_EQ(flat.clusters, (std::vector<std::vector<std::string>>{{"D1"}, {"D2", "D3", "D4"}}));
}

TEST(Cut, BadK) {
  auto d = agglomerate(fixture_distance(), Linkage::Average);
  for (std::size_t k : {0u, 5u}) {
    try {
      cut(d, k);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadK);
    }
  }
}

TEST(Cut, NestedRefinement) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto d = agglomerate(oracle::random_distance(rng, 8), Linkage::Average);
    for (std::size_t k = 1; k < 8; ++k) {
      auto coarse = cut(d, k);
      auto fine = cut(d, k + 1);
      for (const auto& c : fine.clusters) {
        auto home = coarse.cluster_of(c.front());
        for (const auto& id : c) EXPECT_EQ(coarse.cluster_of(id), home);
      }
    }
  }
}

TEST(RemovalDistance, Definition) {
  FlatClustering flat{{{"a", "x"}, {"b"}, {"c"}}, ClusterOrigin::Cut, std::nullopt};
  EXPECT_EQ(removal_distance(flat, "a", "x"), 0u);
  EXPECT_EQ(removal_distance(flat, "a", "b"), 1u);
  EXPECT_EQ(removal_distance(flat, "c", "a"), 2u);
  try {
    removal_distance(flat, "a", "zz");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownDocument);
  }
}

TEST(Agglomerate, RelabelingIsEquivariant) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 6;
    auto dist = oracle::random_distance(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> ids(n);
    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      ids[i] = dist.ids()[perm[i]];
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = dist.at(perm[i], perm[j]);
    }
    auto permuted = make_distance(ids, v);
    for (auto l : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
      auto a = clades(agglomerate(dist, l));
      auto b = clades(agglomerate(permuted, l));
      ASSERT_EQ(a.size(), b.size());
      for (const auto& [set, h] : a) {
        ASSERT_TRUE(b.count(set));
        EXPECT_NEAR(b.at(set), h, 1e-12);
      }
    }
  }
}

TEST(Linkage, NamesRoundTrip) {
  for (auto l : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
    EXPECT_EQ(parse_linkage(to_string(l)), l);
  }
  EXPECT_FALSE(parse_linkage("ward"));
}
