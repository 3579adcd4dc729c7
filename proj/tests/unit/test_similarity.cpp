#include <gtest/gtest.h>

#include <cmath>

#include "chronoclust/error.hpp"
#include "chronoclust/serialize.hpp"
#include "chronoclust/similarity.hpp"
#include "fixture.hpp"

using namespace chronoclust;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(DocVector, FixtureColumn) {
  auto c = fixture::corpus();
  EXPECT_EQ(doc_vector(c.matrix, "D1"), (std::vector<double>{2, 1, 0}));
  EXPECT_EQ(doc_vector(c.matrix, "D4"), (std::vector<double>{0, 0, 3}));
}

TEST(DocVector, SingleEntity) {
  MentionMatrix m({"a"}, {"x", "y"}, {4, 7});
  EXPECT_EQ(doc_vector(m, "y"), (std::vector<double>{7}));
}

TEST(DocVector, UnknownDocument) {
  auto c = fixture::corpus();
  EXPECT_EQ(kind_of([&] { doc_vector(c.matrix, "D9"); }), ErrorKind::UnknownDocument);
}

TEST(Cosine, Examples) {
  std::vector<double> u{3, 1, 2};
  EXPECT_EQ(cosine(u, u), 1.0);
  std::vector<double> a{1, 0, 0}, b{0, 2, 0};
  EXPECT_EQ(cosine(a, b), 0.0);
  std::vector<double> x{2, 1, 0}, y{1, 2, 1};
  EXPECT_NEAR(cosine(x, y), 4.0 / std::sqrt(30.0), 1e-15);
  EXPECT_NEAR(cosine(x, y), 0.730297, 5e-7);
}

TEST(Cosine, Errors) {
  std::vector<double> z{0, 0}, v{1, 2}, w{1, 2, 3};
  EXPECT_EQ(kind_of([&] { cosine(z, v); }), ErrorKind::ZeroVector);
  EXPECT_EQ(kind_of([&] { cosine(v, w); }), ErrorKind::LengthMismatch);
}

TEST(SimilarityMatrix, Fixture) {
  auto s = similarity_matrix(fixture::corpus().matrix);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_NEAR(s.at(0, 1), 4.0 / std::sqrt(30.0), 1e-15);
  // D2=(1,2,1), D3=(0,2,2): 6 / sqrt(6*8)
  EXPECT_NEAR(s.at(1, 2), 6.0 / std::sqrt(48.0), 1e-15);
  // D1 and D4 share no entity.
  EXPECT_EQ(s.at(0, 3), 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s.at(i, i), 1.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(s.at(i, j), s.at(j, i));
  }
}

TEST(SimilarityMatrix, SingleDocument) {
  MentionMatrix m({"a", "b"}, {"x"}, {1, 3});
  auto s = similarity_matrix(m);
  EXPECT_EQ(s.values(), (std::vector<double>{1.0}));
}

TEST(SimilarityMatrix, DuplicateColumns) {
  MentionMatrix m({"a", "b"}, {"x", "y"}, {3, 3, 5, 5});
  EXPECT_EQ(similarity_matrix(m).at(0, 1), 1.0);
}

TEST(SimilarityMatrix, ZeroColumnNamesDocument) {
  MentionMatrix m({"a"}, {"x", "empty"}, {1, 0});
  try {
    similarity_matrix(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
    EXPECT_NE(std::string(e.what()).find("empty"), std::string::npos);
  }
}

TEST(Distance, Pointwise) {
  auto s = similarity_matrix(fixture::corpus().matrix);
  auto d = to_distance(s);
  EXPECT_EQ(d.at(2, 2), 0.0);
  EXPECT_EQ(d.at(0, 3), 1.0);
  EXPECT_NEAR(d.at(0, 1), 1.0 - 4.0 / std::sqrt(30.0), 1e-15);
  EXPECT_NEAR(d.at(0, 1), 0.269703, 5e-7);
}

TEST(Distance, MakeDistanceValidates) {
  EXPECT_NO_THROW(make_distance({"a", "b"}, {0, 0.3, 0.3, 0}));
  EXPECT_THROW(make_distance({"a", "b"}, {0.1, 0.3, 0.3, 0}), Error);
  EXPECT_THROW(make_distance({"a", "b"}, {0, 0.3, 0.2, 0}), Error);
  EXPECT_THROW(make_distance({"a", "b"}, {0, -0.3, -0.3, 0}), Error);
  EXPECT_THROW(make_distance({"a", "b"}, {0, 0.3}), Error);
}

TEST(Export, CsvHasDocumentHeader) {
  auto s = similarity_matrix(MentionMatrix({"a", "b"}, {"x", "y"}, {1, 0, 0, 1}));
  EXPECT_EQ(to_csv(s), "document,x,y\nx,1.0,0.0\ny,0.0,1.0\n");
}
