#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronoclust/clustering.hpp"
#include "chronoclust/corpus.hpp"
#include "chronoclust/gridnet.hpp"

namespace chronoclust {

/// Adjusted Rand Index of two labelings of the same items. When both
/// labelings are trivial in the same way (all singletons, or one block)
/// the index is 1; any other zero-denominator case is 0.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

struct StageDetail {
  std::string stage;
  std::vector<std::string> documents;
  std::size_t clusters_spanned = 0;
  std::size_t modal_cluster = 0;  // index of the cluster holding most of the stage
  double modal_fraction = 0.0;
  bool fully_coclustered = false;
};

struct ConcordanceReport {
  double adjusted_rand = 0.0;
  // Fraction of same-stage (cross-stage) document pairs sharing a cluster;
  // empty when there are no such pairs.
  std::optional<double> same_stage_cocluster_rate;
  std::optional<double> cross_stage_cocluster_rate;
  std::size_t n_documents = 0;
  std::vector<StageDetail> per_stage;
};

/// Compares a flat clustering against the stage partition of a chronology.
/// Throws Error(MissingStage) if a clustered document has no stage.
ConcordanceReport concordance(const FlatClustering& flat, const ChronologyReference& reference);

/// Ranks with ties replaced by their average rank (1-based).
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman's rho: Pearson correlation of average ranks.
/// Throws Error(InsufficientDocuments) for fewer than 3 pairs or when either
/// side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

enum class GeoWeighting { Presence, Counts };

std::string_view to_string(GeoWeighting weighting) noexcept;
std::optional<GeoWeighting> parse_geo_weighting(std::string_view text) noexcept;

struct DocumentGeo {
  std::string document;
  int rank = 0;
  double mean_geo_ordinal = 0.0;
  std::size_t rivers_present = 0;
};

struct ProgressionReport {
  GeoWeighting weighting = GeoWeighting::Presence;
  std::vector<DocumentGeo> documents;  // ascending chronology rank
  double spearman_rho = 0.0;
  std::size_t n_documents = 0;
  std::vector<std::string> notes;
};

/// Mean river geo ordinal per document (presence-weighted by default,
/// count-weighted on request) correlated with chronology rank. Documents
/// without a rank or without any river are skipped and noted.
/// Throws Error(NoRivers) or Error(InsufficientDocuments).
ProgressionReport geo_progression(const Corpus& corpus, const MentionMatrix& matrix,
                                  GeoWeighting weighting = GeoWeighting::Presence);

struct PersistenceReport {
  std::vector<std::pair<std::string, std::size_t>> first_appearance;  // per axis document
  std::size_t entity_count = 0;
  std::size_t continuous_count = 0;
  double fraction_continuous = 0.0;
  std::vector<std::string> constants;  // present in every axis document
};

PersistenceReport persistence_report(const std::vector<TraceSummary>& traces,
                                     const std::vector<std::string>& axis);

}  // namespace chronoclust
