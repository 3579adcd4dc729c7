#include "chronoclust/serialize.hpp"

#include <cstdio>

#include "chronoclust/csv.hpp"
#include "json_build.hpp"

namespace chronoclust {

namespace detail {

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json square_json(const SquareMatrix& matrix, std::string_view kind) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < matrix.size(); ++j) row.push_back(matrix.at(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"kind", kind}, {"documents", matrix.ids()}, {"values", std::move(rows)}};
}

Json dendrogram_json(const Dendrogram& dendrogram, std::optional<Linkage> linkage) {
  Json merges = Json::array();
  for (const auto& m : dendrogram.merges()) {
    merges.push_back(Json{{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  }
  std::vector<std::string> order;
  for (auto leaf : dendrogram.leaf_order()) order.push_back(dendrogram.leaves()[leaf]);
  Json j;
  if (linkage) j["linkage"] = to_string(*linkage);
  j["leaves"] = dendrogram.leaves();
  j["leaf_order"] = order;
  j["merges"] = std::move(merges);
  return j;
}

Json flat_json(const FlatClustering& flat) {
  Json j;
  j["origin"] = to_string(flat.origin);
  j["clusters"] = flat.clusters;
  j["wcss"] = optional_number(flat.wcss);
  return j;
}

Json kmeans_json(const KMeansResult& result) {
  Json restarts = Json::array();
  for (const auto& r : result.restarts) {
    restarts.push_back(Json{{"seed", r.seed},
                            {"start_document", r.start_document},
                            {"iterations", r.iterations},
                            {"converged", r.converged},
                            {"wcss", r.wcss},
                            {"wcss_trace", r.wcss_trace}});
  }
  Json j = flat_json(result.clustering);
  j["best_restart"] = result.best_restart;
  j["restarts"] = std::move(restarts);
  return j;
}

Json traces_json(const std::vector<TraceSummary>& traces) {
  Json arr = Json::array();
  for (const auto& t : traces) {
    arr.push_back(Json{{"entity", t.entity},
                       {"first_doc", t.first_doc},
                       {"last_doc", t.last_doc},
                       {"presence_count", t.presence_count},
                       {"gap_count", t.gap_count},
                       {"continuous", t.continuous}});
  }
  return arr;
}

Json concordance_json(const ConcordanceReport& report) {
  Json stages = Json::array();
  for (const auto& s : report.per_stage) {
    stages.push_back(Json{{"stage", s.stage},
                          {"documents", s.documents},
                          {"clusters_spanned", s.clusters_spanned},
                          {"modal_cluster", s.modal_cluster},
                          {"modal_fraction", s.modal_fraction},
                          {"fully_coclustered", s.fully_coclustered}});
  }
  return Json{{"adjusted_rand", report.adjusted_rand},
              {"same_stage_cocluster_rate", optional_number(report.same_stage_cocluster_rate)},
              {"cross_stage_cocluster_rate", optional_number(report.cross_stage_cocluster_rate)},
              {"n_documents", report.n_documents},
              {"per_stage", std::move(stages)}};
}

Json progression_json(const ProgressionReport& report) {
  Json docs = Json::array();
  for (const auto& d : report.documents) {
    docs.push_back(Json{{"document", d.document},
                        {"rank", d.rank},
                        {"mean_geo_ordinal", d.mean_geo_ordinal},
                        {"rivers_present", d.rivers_present}});
  }
  return Json{{"weighting", to_string(report.weighting)},
              {"spearman_rho", report.spearman_rho},
              {"n_documents", report.n_documents},
              {"documents", std::move(docs)},
              {"notes", report.notes}};
}

Json persistence_json(const PersistenceReport& report) {
  Json first = Json::array();
  for (const auto& [doc, count] : report.first_appearance) {
    first.push_back(Json{{"document", doc}, {"entities", count}});
  }
  return Json{{"entity_count", report.entity_count},
              {"continuous_count", report.continuous_count},
              {"fraction_continuous", report.fraction_continuous},
              {"first_appearance", std::move(first)},
              {"constants", report.constants}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string to_csv(const SquareMatrix& matrix) {
  std::vector<std::string> header{"document"};
  header.insert(header.end(), matrix.ids().begin(), matrix.ids().end());
  std::string out = csv::join_row(header) + "\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::vector<std::string> row{matrix.ids()[i]};
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      row.push_back(detail::Json(matrix.at(i, j)).dump());
    }
    out += csv::join_row(row) + "\n";
  }
  return out;
}

std::string to_json(const SquareMatrix& matrix, std::string_view kind) {
  return detail::dump(detail::square_json(matrix, kind));
}
std::string to_json(const Dendrogram& dendrogram, std::optional<Linkage> linkage) {
  return detail::dump(detail::dendrogram_json(dendrogram, linkage));
}
std::string to_json(const FlatClustering& flat) { return detail::dump(detail::flat_json(flat)); }
std::string to_json(const KMeansResult& result) { return detail::dump(detail::kmeans_json(result)); }
std::string to_json(const std::vector<TraceSummary>& traces) {
  return detail::dump(detail::traces_json(traces));
}
std::string to_json(const ConcordanceReport& report) {
  return detail::dump(detail::concordance_json(report));
}
std::string to_json(const ProgressionReport& report) {
  return detail::dump(detail::progression_json(report));
}
std::string to_json(const PersistenceReport& report) {
  return detail::dump(detail::persistence_json(report));
}

namespace {

std::string rate(const std::optional<double>& v) { return v ? fixed6(*v) : "n/a"; }

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

}  // namespace

std::string to_markdown(const ConcordanceReport& report) {
  std::string out;
  out += "| metric | value |\n|---|---|\n";
  out += "| adjusted Rand index | " + fixed6(report.adjusted_rand) + " |\n";
  out += "| same-stage co-cluster rate | " + rate(report.same_stage_cocluster_rate) + " |\n";
  out += "| cross-stage co-cluster rate | " + rate(report.cross_stage_cocluster_rate) + " |\n";
  out += "| documents | " + std::to_string(report.n_documents) + " |\n\n";
  out += "| stage | documents | clusters spanned | modal fraction | fully co-clustered |\n";
  out += "|---|---|---|---|---|\n";
  for (const auto& s : report.per_stage) {
    out += "| " + s.stage + " | " + join(s.documents) + " | " + std::to_string(s.clusters_spanned) +
           " | " + fixed6(s.modal_fraction) + " | " + (s.fully_coclustered ? "yes" : "no") + " |\n";
  }
  return out;
}

std::string to_markdown(const ProgressionReport& report) {
  std::string out = "Spearman rho (rank vs mean geo ordinal, " +
                    std::string(to_string(report.weighting)) + "-weighted): " +
                    fixed6(report.spearman_rho) + " over " + std::to_string(report.n_documents) +
                    " documents\n\n";
  out += "| document | rank | mean geo ordinal | rivers present |\n|---|---|---|---|\n";
  for (const auto& d : report.documents) {
    out += "| " + d.document + " | " + std::to_string(d.rank) + " | " + fixed6(d.mean_geo_ordinal) +
           " | " + std::to_string(d.rivers_present) + " |\n";
  }
  for (const auto& note : report.notes) out += "\n- " + note;
  if (!report.notes.empty()) out += "\n";
  return out;
}

std::string to_markdown(const PersistenceReport& report) {
  std::string out = "Entities: " + std::to_string(report.entity_count) +
                    ", continuous: " + std::to_string(report.continuous_count) + " (" +
                    fixed6(report.fraction_continuous) + ")\n\n";
  out += "Constants (present in every axis document): " +
         (report.constants.empty() ? std::string("none") : join(report.constants)) + "\n\n";
  out += "| document | first appearances |\n|---|---|\n";
  for (const auto& [doc, count] : report.first_appearance) {
    out += "| " + doc + " | " + std::to_string(count) + " |\n";
  }
  return out;
}

std::string to_markdown(const std::vector<TraceSummary>& traces) {
  std::string out = "| entity | first | last | presences | gaps | continuous |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const auto& t : traces) {
    out += "| " + t.entity + " | " + t.first_doc + " | " + t.last_doc + " | " +
           std::to_string(t.presence_count) + " | " + std::to_string(t.gap_count) + " | " +
           (t.continuous ? "yes" : "no") + " |\n";
  }
  return out;
}

}  // namespace chronoclust
