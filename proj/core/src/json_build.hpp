#pragma once

// Internal: nlohmann::ordered_json builders shared by serialize.cpp and
// pipeline.cpp. Not installed.

#include <json.hpp>

#include "chronoclust/chronometrics.hpp"
#include "chronoclust/clustering.hpp"
#include "chronoclust/gridnet.hpp"
#include "chronoclust/similarity.hpp"

namespace chronoclust::detail {

using Json = nlohmann::ordered_json;

Json square_json(const SquareMatrix& matrix, std::string_view kind);
Json dendrogram_json(const Dendrogram& dendrogram, std::optional<Linkage> linkage);
Json flat_json(const FlatClustering& flat);
Json kmeans_json(const KMeansResult& result);
Json traces_json(const std::vector<TraceSummary>& traces);
Json concordance_json(const ConcordanceReport& report);
Json progression_json(const ProgressionReport& report);
Json persistence_json(const PersistenceReport& report);

std::string dump(const Json& j);

}  // namespace chronoclust::detail
