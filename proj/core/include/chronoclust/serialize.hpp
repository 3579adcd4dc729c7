#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chronoclust/chronometrics.hpp"
#include "chronoclust/clustering.hpp"
#include "chronoclust/gridnet.hpp"
#include "chronoclust/similarity.hpp"

namespace chronoclust {

// Text renderings of analysis results. Every function is deterministic:
// equal inputs give identical bytes. JSON uses shortest round-trip numbers.

std::string to_csv(const SquareMatrix& matrix);
std::string to_json(const SquareMatrix& matrix, std::string_view kind);

std::string to_json(const Dendrogram& dendrogram, std::optional<Linkage> linkage = std::nullopt);
std::string to_json(const FlatClustering& flat);
std::string to_json(const KMeansResult& result);
std::string to_json(const std::vector<TraceSummary>& traces);
std::string to_json(const ConcordanceReport& report);
std::string to_json(const ProgressionReport& report);
std::string to_json(const PersistenceReport& report);

std::string to_markdown(const ConcordanceReport& report);
std::string to_markdown(const ProgressionReport& report);
std::string to_markdown(const PersistenceReport& report);
std::string to_markdown(const std::vector<TraceSummary>& traces);

/// Fixed six-decimal rendering used in markdown tables.
std::string fixed6(double value);

}  // namespace chronoclust
