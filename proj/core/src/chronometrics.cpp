#include "chronoclust/chronometrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "chronoclust/error.hpp"

namespace chronoclust {

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch, "labelings differ in length");
  }
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows;
  std::map<std::size_t, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0;
  for (const auto& [key, n] : table) index += choose2(n);
  double sum_rows = 0.0;
  for (const auto& [key, n] : rows) sum_rows += choose2(n);
  double sum_cols = 0.0;
  for (const auto& [key, n] : cols) sum_cols += choose2(n);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = total > 0 ? sum_rows * sum_cols / total : 0.0;
  const double max_index = (sum_rows + sum_cols) / 2.0;
  const double denom = max_index - expected;
  if (denom == 0.0) {
    // Both labelings all-singletons or both one block.
    return sum_rows == sum_cols ? 1.0 : 0.0;
  }
  return (index - expected) / denom;
}

ConcordanceReport concordance(const FlatClustering& flat, const ChronologyReference& reference) {
  std::vector<std::string> docs;
  std::vector<std::size_t> cluster_labels;
  std::vector<std::size_t> stage_labels;
  for (std::size_t c = 0; c < flat.clusters.size(); ++c) {
    for (const auto& id : flat.clusters[c]) {
      const auto* a = reference.find(id);
      if (!a) {
        throw Error(ErrorKind::MissingStage,
                    "document `" + id + "` has no stage in `" + reference.name + "`");
      }
      auto pos = reference.stage_position(a->stage);
      if (!pos) throw Error(ErrorKind::MissingStage, "stage `" + a->stage + "` is not listed");
      docs.push_back(id);
      cluster_labels.push_back(c);
      stage_labels.push_back(*pos);
    }
  }

  ConcordanceReport report;
  report.n_documents = docs.size();
  report.adjusted_rand = adjusted_rand_index(cluster_labels, stage_labels);

  std::size_t same_pairs = 0, same_together = 0, cross_pairs = 0, cross_together = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = i + 1; j < docs.size(); ++j) {
      bool together = cluster_labels[i] == cluster_labels[j];
      if (stage_labels[i] == stage_labels[j]) {
        ++same_pairs;
        same_together += together;
      } else {
        ++cross_pairs;
        cross_together += together;
      }
    }
  }
  if (same_pairs) report.same_stage_cocluster_rate = double(same_together) / double(same_pairs);
  if (cross_pairs) report.cross_stage_cocluster_rate = double(cross_together) / double(cross_pairs);

  for (std::size_t s = 0; s < reference.stages.size(); ++s) {
    StageDetail detail;
    detail.stage = reference.stages[s];
    std::map<std::size_t, std::size_t> per_cluster;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (stage_labels[i] != s) continue;
      detail.documents.push_back(docs[i]);
      ++per_cluster[cluster_labels[i]];
    }
    if (detail.documents.empty()) continue;
    detail.clusters_spanned = per_cluster.size();
    std::size_t modal_count = 0;
    for (const auto& [cluster, count] : per_cluster) {
      if (count > modal_count) {
        modal_count = count;
        detail.modal_cluster = cluster;
      }
    }
    detail.modal_fraction = double(modal_count) / double(detail.documents.size());
    detail.fully_coclustered = per_cluster.size() == 1;
    report.per_stage.push_back(std::move(detail));
  }
  return report;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto i, auto j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "spearman inputs differ in length");
  if (x.size() < 3) {
    throw Error(ErrorKind::InsufficientDocuments,
                "rank correlation needs at least 3 documents, got " + std::to_string(x.size()));
  }
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // average ranks always sum to n(n+1)/2
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mean;
    double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::InsufficientDocuments, "rank correlation undefined: all values tied");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string_view to_string(GeoWeighting weighting) noexcept {
  return weighting == GeoWeighting::Counts ? "counts" : "presence";
}

std::optional<GeoWeighting> parse_geo_weighting(std::string_view text) noexcept {
  if (text == "presence") return GeoWeighting::Presence;
  if (text == "counts") return GeoWeighting::Counts;
  return std::nullopt;
}

ProgressionReport geo_progression(const Corpus& corpus, const MentionMatrix& matrix,
                                  GeoWeighting weighting) {
  ProgressionReport report;
  report.weighting = weighting;

  std::vector<std::pair<std::size_t, int>> rivers;  // matrix row, ordinal
  for (std::size_t e = 0; e < matrix.entity_count(); ++e) {
    const auto* rec = corpus.find_entity(matrix.entity_ids()[e]);
    if (!rec || rec->category != Category::River) continue;
    if (!rec->geo_ordinal) {
      report.notes.push_back("river `" + rec->id + "` has no geo_ordinal; ignored");
      continue;
    }
    rivers.emplace_back(e, *rec->geo_ordinal);
  }
  if (rivers.empty()) throw Error(ErrorKind::NoRivers, "no river with a geo_ordinal in the matrix");

  for (std::size_t d = 0; d < matrix.document_count(); ++d) {
    const auto& id = matrix.document_ids()[d];
    const auto* a = corpus.chronology.find(id);
    if (!a) {
      report.notes.push_back("document `" + id + "` has no chronology rank; skipped");
      continue;
    }
    double weight_sum = 0.0;
    double weighted = 0.0;
    std::size_t present = 0;
    for (const auto& [row, ordinal] : rivers) {
      auto c = matrix.at(row, d);
      if (c <= 0) continue;
      double w = weighting == GeoWeighting::Counts ? static_cast<double>(c) : 1.0;
      weight_sum += w;
      weighted += w * static_cast<double>(ordinal);
      ++present;
    }
    if (present == 0) {
      report.notes.push_back("document `" + id + "` mentions no river; skipped");
      continue;
    }
    report.documents.push_back({id, a->rank, weighted / weight_sum, present});
  }
  std::stable_sort(report.documents.begin(), report.documents.end(),
                   [](const auto& a, const auto& b) { return a.rank < b.rank; });
  report.n_documents = report.documents.size();

  std::vector<double> ranks;
  std::vector<double> means;
  for (const auto& doc : report.documents) {
    ranks.push_back(static_cast<double>(doc.rank));
    means.push_back(doc.mean_geo_ordinal);
  }
  report.spearman_rho = spearman(ranks, means);
  return report;
}

PersistenceReport persistence_report(const std::vector<TraceSummary>& traces,
                                     const std::vector<std::string>& axis) {
  PersistenceReport report;
  report.entity_count = traces.size();
  for (const auto& doc : axis) report.first_appearance.emplace_back(doc, 0);
  for (const auto& t : traces) {
    for (auto& [doc, count] : report.first_appearance) {
      if (doc == t.first_doc) ++count;
    }
    if (t.continuous) ++report.continuous_count;
    if (!axis.empty() && t.first_doc == axis.front() && t.last_doc == axis.back() && t.continuous) {
      report.constants.push_back(t.entity);
    }
  }
  if (!traces.empty()) {
    report.fraction_continuous = double(report.continuous_count) / double(traces.size());
  }
  return report;
}

}  // namespace chronoclust
