#include "chronoclust/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "chronoclust/error.hpp"

namespace chronoclust {

SquareMatrix::SquareMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * ids_.size()) {
    throw Error(ErrorKind::LengthMismatch, "square matrix needs " +
                                               std::to_string(ids_.size() * ids_.size()) +
                                               " values, got " + std::to_string(values_.size()));
  }
}

std::vector<double> doc_vector(const MentionMatrix& matrix, std::string_view document_id) {
  auto d = matrix.document_index(document_id);
  if (!d) throw Error(ErrorKind::UnknownDocument, "`" + std::string(document_id) + "`");
  std::vector<double> v(matrix.entity_count());
  for (std::size_t e = 0; e < v.size(); ++e) v[e] = static_cast<double>(matrix.at(e, *d));
  return v;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorKind::ZeroVector, "cosine of an all-zero vector");
  // For u == v, dot == uu bit-for-bit and sqrt(uu * uu) == uu exactly.
  double score = dot / std::sqrt(uu * vv);
  return std::clamp(score, -1.0, 1.0);
}

SimilarityMatrix similarity_matrix(const MentionMatrix& matrix) {
  const std::size_t n = matrix.document_count();
  std::vector<std::vector<double>> columns;
  columns.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (matrix.column_total(d) == 0) {
      throw Error(ErrorKind::ZeroVector,
                  "document `" + matrix.document_ids()[d] + "` has no mentions");
    }
    columns.push_back(doc_vector(matrix, matrix.document_ids()[d]));
  }
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      // Counts are nonnegative, so cosine is already >= 0.
      double s = cosine(columns[i], columns[j]);
      values[i * n + j] = s;
      values[j * n + i] = s;
    }
  }
  return SimilarityMatrix(matrix.document_ids(), std::move(values));
}

DistanceMatrix to_distance(const SimilarityMatrix& similarity) {
  const std::size_t n = similarity.size();
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values[i * n + j] = i == j ? 0.0 : 1.0 - similarity.at(i, j);
    }
  }
  return DistanceMatrix(similarity.ids(), std::move(values));
}

DistanceMatrix make_distance(std::vector<std::string> ids, std::vector<double> values) {
  DistanceMatrix m(std::move(ids), std::move(values));
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.at(i, i) != 0.0) throw Error(ErrorKind::LengthMismatch, "distance diagonal must be zero");
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m.at(i, j) != m.at(j, i) || !(m.at(i, j) >= 0.0)) {
        throw Error(ErrorKind::LengthMismatch,
                    "distances must be symmetric and nonnegative at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
  return m;
}

}  // namespace chronoclust
