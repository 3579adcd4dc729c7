#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronoclust/corpus.hpp"

namespace chronoclust {

/// Dense symmetric document x document grid, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  SquareMatrix(std::vector<std::string> ids, std::vector<double> values);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// Cosine similarity between documents. Unit diagonal, entries in [0, 1].
struct SimilarityMatrix : SquareMatrix {
  using SquareMatrix::SquareMatrix;
};

/// Pointwise 1 - similarity. Zero diagonal, symmetric.
struct DistanceMatrix : SquareMatrix {
  using SquareMatrix::SquareMatrix;
};

/// The document's column in entity order.
/// Throws Error(UnknownDocument).
std::vector<double> doc_vector(const MentionMatrix& matrix, std::string_view document_id);

/// dot(u, v) / sqrt(|u|^2 |v|^2), clamped to [-1, 1].
/// Identical vectors score exactly 1.0.
/// Throws Error(LengthMismatch) or Error(ZeroVector).
double cosine(std::span<const double> u, std::span<const double> v);

/// Pairwise cosine over document columns; each pair is computed
/// independently so results do not depend on evaluation order.
/// Throws Error(ZeroVector) naming the first all-zero document.
SimilarityMatrix similarity_matrix(const MentionMatrix& matrix);

DistanceMatrix to_distance(const SimilarityMatrix& similarity);

/// Distance matrix from explicit values; validates symmetry, a zero
/// diagonal and nonnegative entries. Throws Error(LengthMismatch).
DistanceMatrix make_distance(std::vector<std::string> ids, std::vector<double> values);

}  // namespace chronoclust
