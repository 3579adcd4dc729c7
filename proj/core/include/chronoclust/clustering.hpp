#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chronoclust/corpus.hpp"
#include "chronoclust/similarity.hpp"

namespace chronoclust {

enum class Linkage { Single, Complete, Average };

std::string_view to_string(Linkage linkage) noexcept;
std::optional<Linkage> parse_linkage(std::string_view text) noexcept;

/// One agglomeration step. Nodes 0..N-1 are leaves (canonical document
/// positions); node N+i is the cluster formed by merge i.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;  // leaves under the new node

  bool operator==(const Merge&) const = default;
};

/// Binary merge tree. Invariants (checked on construction): N-1 merges for
/// N leaves, every node is a child at most once and only after it exists,
/// heights nondecreasing.
class Dendrogram {
 public:
  Dendrogram() = default;
  Dendrogram(std::vector<std::string> leaves, std::vector<Merge> merges);

  const std::vector<std::string>& leaves() const noexcept { return leaves_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  std::size_t root() const noexcept;
  bool is_leaf(std::size_t node) const noexcept { return node < leaves_.size(); }

  /// Height at which the node was formed; 0 for leaves.
  double height(std::size_t node) const;

  /// Canonical leaf indices left to right.
  std::vector<std::size_t> leaf_order() const;

  /// Canonical leaf indices under a node, in drawing order.
  std::vector<std::size_t> members(std::size_t node) const;

  bool operator==(const Dendrogram&) const = default;

 private:
  std::vector<std::string> leaves_;
  std::vector<Merge> merges_;
};

/// Every internal node as (leaf id set -> height). Compares topology and
/// heights independent of leaf numbering.
std::map<std::set<std::string>, double> clades(const Dendrogram& dendrogram);

/// Agglomerative clustering over a distance matrix. Each step merges the
/// pair of current clusters at minimal linkage distance; ties go to the
/// pair whose (smaller, larger) minimum canonical leaf index is
/// lexicographically least. The child with the smaller minimum leaf index
/// is placed left. Throws Error(TooFewDocuments) when N < 2.
Dendrogram agglomerate(const DistanceMatrix& distances, Linkage linkage);

enum class ClusterOrigin { Cut, KMeans, Oracle };

std::string_view to_string(ClusterOrigin origin) noexcept;

/// An ordered partition of documents.
struct FlatClustering {
  std::vector<std::vector<std::string>> clusters;
  ClusterOrigin origin = ClusterOrigin::Cut;
  std::optional<double> wcss;

  std::optional<std::size_t> cluster_of(std::string_view document_id) const noexcept;
  std::size_t document_count() const noexcept;

  bool operator==(const FlatClustering&) const = default;
};

/// Undoes the last k-1 merges. Clusters follow dendrogram leaf order, as do
/// the documents inside each cluster. Throws Error(BadK) unless 1 <= k <= N.
FlatClustering cut(const Dendrogram& dendrogram, std::size_t k);

/// Gap between the positions of the clusters holding a and b in the ordered
/// cluster list: 0 for the same cluster, 1 for adjacent ("once removed"),
/// 2 for "twice removed". This reads the informal phrase as an index gap,
/// not as a count of dendrogram hops. Throws Error(UnknownDocument).
std::size_t removal_distance(const FlatClustering& flat, std::string_view a, std::string_view b);

enum class PointMetric { Counts, Presence };
enum class Normalization { None, L1, L2 };

std::string_view to_string(PointMetric metric) noexcept;
std::optional<PointMetric> parse_point_metric(std::string_view text) noexcept;
std::string_view to_string(Normalization normalization) noexcept;
std::optional<Normalization> parse_normalization(std::string_view text) noexcept;

/// Documents as points in entity space, one row per document.
struct PointSet {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> coords;

  std::size_t size() const noexcept { return ids.size(); }
};

PointSet document_points(const MentionMatrix& matrix, PointMetric metric = PointMetric::Counts,
                         Normalization normalization = Normalization::None);

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct KMeansOptions {
  std::size_t k = 3;
  std::size_t restarts = 10;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_iters = 100;
  PointMetric metric = PointMetric::Counts;
  Normalization normalization = Normalization::None;
};

struct KMeansRestart {
  std::uint64_t seed = 0;
  std::string start_document;
  std::vector<double> wcss_trace;  // partition WCSS after each assignment step
  std::size_t iterations = 0;
  bool converged = false;
  double wcss = 0.0;
};

struct KMeansResult {
  FlatClustering clustering;
  std::size_t best_restart = 0;
  std::vector<KMeansRestart> restarts;
};

/// Lloyd's algorithm with deterministic farthest-first initialization.
/// Restart r draws its starting point from seed + r; the best restart by
/// WCSS wins, ties to the lower restart index. Clusters are reported in
/// centroid order, documents inside a cluster in input order.
/// Throws Error(BadK) unless 1 <= k <= N, or
/// Error(EmptyClusterUnrecoverable) if an empty cluster cannot be refilled.
KMeansResult kmeans_detailed(const PointSet& points, const KMeansOptions& options);

FlatClustering kmeans(const MentionMatrix& matrix, const KMeansOptions& options);

/// Sum over clusters of squared Euclidean distances to the cluster mean.
/// Throws Error(PartitionMismatch) unless the clusters partition the points.
double wcss(const PointSet& points, const FlatClustering& flat);
double wcss(const MentionMatrix& matrix, const FlatClustering& flat);

inline constexpr std::size_t kExhaustiveLimit = 12;

/// Minimum-WCSS partition into at most k nonempty parts by enumerating
/// restricted growth strings; ties go to the lexicographically smallest
/// string. Throws Error(TooLarge) above kExhaustiveLimit documents.
FlatClustering exhaustive_optimum(const PointSet& points, std::size_t k);
FlatClustering exhaustive_optimum(const MentionMatrix& matrix, std::size_t k);

/// Newick text with branch length = parent height - own height.
std::string newick(const Dendrogram& dendrogram);

/// Parses Newick with branch lengths back into a dendrogram. Leaves are
/// numbered in order of appearance. Throws Error(MalformedNewick).
Dendrogram parse_newick(std::string_view text);

}  // namespace chronoclust
