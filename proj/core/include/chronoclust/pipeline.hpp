#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chronoclust/clustering.hpp"
#include "chronoclust/config.hpp"
#include "chronoclust/corpus.hpp"
#include "chronoclust/gridnet.hpp"

namespace chronoclust {

// Exit status contract of every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitDomain = 2;

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;  // human-readable summary
  std::string err;  // diagnostics
  std::vector<std::filesystem::path> written;
};

/// Reads and parses the configured inputs. Throws Error(Io) for unreadable
/// files and ValidationError for invalid content.
Corpus load_corpus(const RunConfig& config);

/// Applies the configured category set, family-only flag and excluded
/// documents to the corpus counts.
SliceResult apply_slice(const Corpus& corpus, const RunConfig& config);

/// Grid axis for the configured axis kind: documents in chronology rank
/// order (unranked ones appended by index) or in index order.
std::vector<std::string> grid_axis(const Corpus& corpus, const MentionMatrix& matrix, AxisKind axis);

/// Lanes in matrix order, or west-to-east by geo ordinal for the geo axis
/// (entities without an ordinal follow in matrix order).
std::vector<std::string> grid_lanes(const Corpus& corpus, const MentionMatrix& matrix, AxisKind axis);

/// FNV-1a 64 over the canonical config and the bytes of every input file,
/// as 16 hex digits.
std::string config_hash(const RunConfig& config);

CommandResult cmd_validate(const RunConfig& config);
CommandResult cmd_cluster(const RunConfig& config);
CommandResult cmd_grid(const RunConfig& config);
/// Full pipeline: every cluster and grid artifact plus report.json and
/// report.md.
CommandResult cmd_report(const RunConfig& config);

/// True when both partitions hold the same sets of documents, whatever the
/// cluster order.
bool same_partition(const std::vector<std::vector<std::string>>& a,
                    const std::vector<std::vector<std::string>>& b);

/// ARI between two partitions of the same documents.
/// Throws Error(PartitionMismatch) when the document sets differ.
double partition_ari(const std::vector<std::vector<std::string>>& a,
                     const std::vector<std::vector<std::string>>& b);

struct KMeansAttempt {
  PointMetric metric = PointMetric::Counts;
  Normalization normalization = Normalization::None;
  FlatClustering clustering;
  double ari = 0.0;
  bool exact = false;
};

struct KMeansSearch {
  std::vector<KMeansAttempt> attempts;  // metric-major, then normalization
  std::size_t best = 0;                 // first exact match, else highest ARI
  bool exact() const { return !attempts.empty() && attempts[best].exact; }
};

/// Runs k-means (k = target size) under every metric x normalization and
/// compares each result with the target partition.
KMeansSearch search_kmeans_partition(const MentionMatrix& matrix,
                                     const std::vector<std::vector<std::string>>& target,
                                     KMeansOptions options);

struct CoclusterAttempt {
  Linkage linkage = Linkage::Average;
  std::size_t k = 0;
  FlatClustering clustering;
  std::size_t removal = 0;  // removal distance between the two documents
};

struct CoclusterSearch {
  std::vector<CoclusterAttempt> attempts;  // linkage-major, then k
  std::size_t best = 0;                    // first with removal 0, else the smallest removal
  bool found() const { return !attempts.empty() && attempts[best].removal == 0; }
};

/// Agglomerates under every linkage and cuts at each k in [k_min, k_max]
/// (clamped to the document count), checking whether a and b share a
/// cluster.
CoclusterSearch search_cocluster(const MentionMatrix& matrix, const std::string& a,
                                 const std::string& b, std::size_t k_min = 2,
                                 std::size_t k_max = 6);

/// Published three-cluster k-means grouping of the ten Mandalas on river
/// mentions.
std::vector<std::vector<std::string>> reference_river_partition();

}  // namespace chronoclust
