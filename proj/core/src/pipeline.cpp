#include "chronoclust/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chronoclust/chronometrics.hpp"
#include "chronoclust/error.hpp"
#include "chronoclust/serialize.hpp"
#include "chronoclust/similarity.hpp"
#include "json_build.hpp"

namespace chronoclust {

namespace fs = std::filesystem;
using detail::Json;

namespace {

std::string read_file(const fs::path& path, std::string_view what) {
  if (path.empty()) throw Error(ErrorKind::BadConfig, std::string("no ") + std::string(what) + " file configured");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + std::string(what) + " `" + path.string() + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string extension_format(const std::string& name) {
  auto dot = name.rfind('.');
  return dot == std::string::npos ? std::string() : name.substr(dot + 1);
}

class Writer {
 public:
  Writer(const RunConfig& config, CommandResult& result) : config_(config), result_(result) {}

  void write(const std::string& name, const std::string& content) {
    if (!config_.formats.count(extension_format(name))) return;
    std::error_code ec;
    fs::create_directories(config_.out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create `" + config_.out_dir.string() + "`: " + ec.message());
    auto path = config_.out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error(ErrorKind::Io, "cannot write `" + path.string() + "`");
    result_.written.push_back(path);
  }

 private:
  const RunConfig& config_;
  CommandResult& result_;
};

template <typename Body>
CommandResult guarded(Body body) {
  CommandResult result;
  try {
    body(result);
  } catch (const ValidationError& e) {
    result.exit_code = kExitDomain;
    for (const auto& issue : e.issues()) result.err += issue.describe() + "\n";
  } catch (const Error& e) {
    result.exit_code = e.kind() == ErrorKind::Io ? kExitIo : kExitDomain;
    result.err += std::string(e.what()) + "\n";
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitIo;
    result.err += std::string("Io: ") + e.what() + "\n";
  }
  return result;
}

StyleOptions load_style(const RunConfig& config) {
  if (config.style) return StyleOptions::from_json(read_file(*config.style, "style"));
  StyleOptions style;
  style.lanes_as_columns = config.axis == AxisKind::Geo;
  return style;
}

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

std::string clusters_text(const std::vector<std::vector<std::string>>& clusters) {
  std::string out;
  for (const auto& c : clusters) out += (out.empty() ? "{" : " {") + join(c, ",") + "}";
  return out;
}

// Everything the commands share, computed once per invocation.
struct Analysis {
  Corpus corpus;
  SliceResult sliced;
};

Analysis prepare(const RunConfig& config) {
  Analysis a{load_corpus(config), {}};
  a.sliced = apply_slice(a.corpus, config);
  return a;
}

KMeansOptions kmeans_options(const RunConfig& config) {
  KMeansOptions o;
  o.k = config.k;
  o.restarts = config.restarts;
  o.seed = config.seed;
  o.max_iters = config.max_iters;
  o.metric = config.metric;
  o.normalization = config.normalization;
  return o;
}

struct ClusterOutputs {
  SimilarityMatrix similarity;
  std::optional<Dendrogram> dendrogram;
  std::optional<FlatClustering> cut_flat;
  std::optional<KMeansResult> kmeans;
};

void write_cluster_outputs(Writer& writer, const ClusterOutputs& c, const RunConfig& config) {
  writer.write("similarity.csv", to_csv(c.similarity));
  writer.write("similarity.json", to_json(c.similarity, "similarity"));
  if (c.dendrogram) {
    writer.write("dendrogram.nwk", newick(*c.dendrogram) + "\n");
    writer.write("dendrogram.json", to_json(*c.dendrogram, config.linkage));
  }
  if (c.kmeans) writer.write("kmeans.json", to_json(*c.kmeans));
  const FlatClustering& flat =
      config.algo == Algorithm::KMeans ? c.kmeans->clustering : *c.cut_flat;
  writer.write("clusters.json", to_json(flat));
}

struct GridOutputs {
  GridNetwork grid;
  std::vector<TraceSummary> trace_list;
  PersistenceReport persistence;
};

GridOutputs run_grid(const Analysis& a, const RunConfig& config) {
  auto presence = to_presence(a.sliced.matrix);
  auto axis = grid_axis(a.corpus, presence, config.axis);
  auto lanes = grid_lanes(a.corpus, presence, config.axis);
  GridOutputs g;
  g.grid = build_grid(presence, axis, lanes);
  g.trace_list = traces(g.grid);
  g.persistence = persistence_report(g.trace_list, g.grid.axis_order);
  return g;
}

void write_grid_outputs(Writer& writer, const GridOutputs& g, const StyleOptions& style) {
  writer.write("grid.dot", export_dot(g.grid));
  writer.write("grid.graphml", export_graphml(g.grid));
  writer.write("grid.svg", export_svg(g.grid, style));
  writer.write("traces.json", to_json(g.trace_list));
  writer.write("traces.md", to_markdown(g.trace_list));
  writer.write("persistence.json", to_json(g.persistence));
}

Json skipped(const std::string& reason) { return Json{{"skipped", reason}}; }

bool has_all(const MentionMatrix& m, const std::vector<std::vector<std::string>>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) {
    for (const auto& id : p) {
      if (!m.document_index(id)) return false;
      ++n;
    }
  }
  return n == m.document_count();
}

}  // namespace

Corpus load_corpus(const RunConfig& config) {
  CorpusText text;
  text.entities = read_file(config.entities, "entities");
  text.documents = read_file(config.documents, "documents");
  text.mentions = read_file(config.mentions, "mentions");
  if (config.chronology) text.chronology = read_file(*config.chronology, "chronology");
  return parse_corpus(text);
}

SliceResult apply_slice(const Corpus& corpus, const RunConfig& config) {
  std::set<std::string> excluded(config.exclude_docs.begin(), config.exclude_docs.end());
  for (const auto& id : excluded) {
    if (!corpus.find_document(id)) {
      throw Error(ErrorKind::UnknownDocument, "excluded document `" + id + "` is not in the corpus");
    }
  }
  bool family_only = config.family_only;
  return slice(corpus, config.categories, [&](const DocumentRecord& d) {
    return !excluded.count(d.id) && (!family_only || d.is_family);
  });
}

std::vector<std::string> grid_axis(const Corpus& corpus, const MentionMatrix& matrix, AxisKind axis) {
  std::vector<std::string> order = matrix.document_ids();  // index order
  if (axis == AxisKind::Index) return order;
  std::stable_sort(order.begin(), order.end(), [&](const std::string& x, const std::string& y) {
    const auto* ax = corpus.chronology.find(x);
    const auto* ay = corpus.chronology.find(y);
    if (ax && ay) return ax->rank < ay->rank;
    return ax != nullptr && ay == nullptr;
  });
  return order;
}

std::vector<std::string> grid_lanes(const Corpus& corpus, const MentionMatrix& matrix, AxisKind axis) {
  std::vector<std::string> lanes = matrix.entity_ids();
  if (axis != AxisKind::Geo) return lanes;
  auto ordinal = [&](const std::string& id) -> std::optional<int> {
    const auto* e = corpus.find_entity(id);
    return e ? e->geo_ordinal : std::nullopt;
  };
  std::stable_sort(lanes.begin(), lanes.end(), [&](const std::string& x, const std::string& y) {
    auto ox = ordinal(x);
    auto oy = ordinal(y);
    if (ox && oy) return *ox < *oy;
    return ox.has_value() && !oy.has_value();
  });
  return lanes;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  auto feed = [&](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    // Separator so that moving bytes between fields changes the hash.
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  feed(config.canonical());
  feed(read_file(config.entities, "entities"));
  feed(read_file(config.documents, "documents"));
  feed(read_file(config.mentions, "mentions"));
  feed(config.chronology ? read_file(*config.chronology, "chronology") : std::string());
  feed(config.style ? read_file(*config.style, "style") : std::string());
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

CommandResult cmd_validate(const RunConfig& config) {
  return guarded([&](CommandResult& r) {
    auto corpus = load_corpus(config);
    r.out += "valid: " + std::to_string(corpus.entities.size()) + " entities, " +
             std::to_string(corpus.documents.size()) + " documents, " +
             std::to_string(corpus.matrix.entity_count()) + " entities with mentions, chronology `" +
             corpus.chronology.name + "`\n";
  });
}

namespace {

ClusterOutputs run_cluster(const Analysis& a, const RunConfig& config, bool want_kmeans,
                           bool want_agglomerative) {
  ClusterOutputs c{similarity_matrix(a.sliced.matrix), {}, {}, {}};
  if (want_agglomerative) {
    c.dendrogram = agglomerate(to_distance(c.similarity), config.linkage);
    c.cut_flat = cut(*c.dendrogram, config.k);
  }
  if (want_kmeans) {
    c.kmeans = kmeans_detailed(
        document_points(a.sliced.matrix, config.metric, config.normalization), kmeans_options(config));
  }
  return c;
}

std::string slice_summary(const SliceResult& s) {
  std::string out = "slice: " + std::to_string(s.matrix.entity_count()) + " entities x " +
                    std::to_string(s.matrix.document_count()) + " documents\n";
  for (const auto& note : s.notes) out += "note: " + note + "\n";
  return out;
}

}  // namespace

CommandResult cmd_cluster(const RunConfig& config) {
  return guarded([&](CommandResult& r) {
    auto a = prepare(config);
    bool km = config.algo == Algorithm::KMeans;
    auto c = run_cluster(a, config, km, !km);
    Writer writer(config, r);
    write_cluster_outputs(writer, c, config);
    r.out += slice_summary(a.sliced);
    const auto& flat = km ? c.kmeans->clustering : *c.cut_flat;
    r.out += std::string(km ? "kmeans" : to_string(config.linkage)) + " k=" + std::to_string(config.k) +
             ": " + clusters_text(flat.clusters) + "\n";
  });
}

CommandResult cmd_grid(const RunConfig& config) {
  return guarded([&](CommandResult& r) {
    auto a = prepare(config);
    auto style = load_style(config);
    auto g = run_grid(a, config);
    Writer writer(config, r);
    write_grid_outputs(writer, g, style);
    r.out += slice_summary(a.sliced);
    for (const auto& note : g.grid.notes) r.out += "note: " + note + "\n";
    r.out += "grid: " + std::to_string(g.grid.nodes.size()) + " nodes, " +
             std::to_string(g.grid.edges.size()) + " edges along " + join(g.grid.axis_order, ",") + "\n";
  });
}

namespace {

Json concordance_section(const ClusterOutputs& c, const Corpus& corpus) {
  if (corpus.chronology.empty()) return skipped("no chronology reference");
  Json j;
  j["reference"] = corpus.chronology.name;
  auto add = [&](const char* key, const FlatClustering& flat) {
    try {
      j[key] = detail::concordance_json(concordance(flat, corpus.chronology));
    } catch (const Error& e) {
      j[key] = skipped(e.what());
    }
  };
  add("agglomerative", *c.cut_flat);
  add("kmeans", c.kmeans->clustering);
  return j;
}

Json progression_section(const Analysis& a, const RunConfig& config,
                         std::optional<ProgressionReport>& out) {
  std::set<std::string> kept(a.sliced.matrix.document_ids().begin(),
                             a.sliced.matrix.document_ids().end());
  try {
    auto rivers = slice(a.corpus, CategorySet{Category::River},
                        [&](const DocumentRecord& d) { return kept.count(d.id) > 0; });
    out = geo_progression(a.corpus, rivers.matrix, config.weighting);
    return detail::progression_json(*out);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmptySlice) {
      return skipped("NoRivers: no river entity is mentioned in the sliced documents");
    }
    return skipped(e.what());
  }
}

Json reference_checks(const Analysis& a, const RunConfig& config, std::string& md) {
  Json j = Json::object();
  const auto& m = a.sliced.matrix;
  auto target = reference_river_partition();
  if (has_all(m, target)) {
    auto search = search_kmeans_partition(m, target, kmeans_options(config));
    Json attempts = Json::array();
    for (const auto& at : search.attempts) {
      attempts.push_back(Json{{"metric", to_string(at.metric)},
                              {"normalization", to_string(at.normalization)},
                              {"clusters", at.clustering.clusters},
                              {"ari", at.ari},
                              {"exact", at.exact}});
    }
    const auto& best = search.attempts[search.best];
    j["kmeans_partition"] = Json{{"target", target},
                                 {"exact_match", search.exact()},
                                 {"best_metric", to_string(best.metric)},
                                 {"best_normalization", to_string(best.normalization)},
                                 {"best_clusters", best.clustering.clusters},
                                 {"best_ari", best.ari},
                                 {"attempts", std::move(attempts)}};
    md += "- k-means target " + clusters_text(target) + ": " +
          (search.exact() ? "reproduced" : "not reproduced") + " (best: metric " +
          std::string(to_string(best.metric)) + ", normalization " +
          std::string(to_string(best.normalization)) + ", " + clusters_text(best.clustering.clusters) +
          ", ARI " + fixed6(best.ari) + ")\n";
  }
  if (m.document_index("M1") && m.document_index("M5") && m.document_count() >= 2) {
    auto search = search_cocluster(m, "M1", "M5");
    Json attempts = Json::array();
    for (const auto& at : search.attempts) {
      attempts.push_back(Json{{"linkage", to_string(at.linkage)},
                              {"k", at.k},
                              {"clusters", at.clustering.clusters},
                              {"removal_distance", at.removal}});
    }
    const auto& best = search.attempts[search.best];
    j["m1_m5_cocluster"] = Json{{"found", search.found()},
                                {"best_linkage", to_string(best.linkage)},
                                {"best_k", best.k},
                                {"best_clusters", best.clustering.clusters},
                                {"best_removal_distance", best.removal},
                                {"attempts", std::move(attempts)}};
    md += "- M1 and M5 co-clustered: " + std::string(search.found() ? "yes" : "no") + " (" +
          std::string(to_string(best.linkage)) + " linkage, k=" + std::to_string(best.k) +
          ", removal distance " + std::to_string(best.removal) + ")\n";
  }
  return j;
}

}  // namespace

CommandResult cmd_report(const RunConfig& config) {
  return guarded([&](CommandResult& r) {
    auto hash = config_hash(config);
    auto a = prepare(config);
    auto style = load_style(config);
    auto c = run_cluster(a, config, true, true);
    auto g = run_grid(a, config);
    Writer writer(config, r);
    write_cluster_outputs(writer, c, config);
    write_grid_outputs(writer, g, style);

    Json report;
    report["tool"] = "chronoclust";
    report["config_hash"] = hash;
    report["seed"] = config.seed;
    report["settings"] = Json{{"algo", to_string(config.algo)},
                              {"linkage", to_string(config.linkage)},
                              {"k", config.k},
                              {"restarts", config.restarts},
                              {"max_iters", config.max_iters},
                              {"metric", to_string(config.metric)},
                              {"normalization", to_string(config.normalization)},
                              {"axis", to_string(config.axis)},
                              {"weighting", to_string(config.weighting)}};
    report["corpus"] = Json{{"entities", a.corpus.entities.size()},
                            {"documents", a.corpus.documents.size()},
                            {"chronology", a.corpus.chronology.name},
                            {"slice_entities", a.sliced.matrix.entity_ids()},
                            {"slice_documents", a.sliced.matrix.document_ids()},
                            {"dropped_documents", a.sliced.dropped_documents},
                            {"notes", a.sliced.notes}};
    report["similarity"] = detail::square_json(c.similarity, "similarity");
    Json agg = detail::dendrogram_json(*c.dendrogram, config.linkage);
    agg["newick"] = newick(*c.dendrogram);
    agg["cut"] = detail::flat_json(*c.cut_flat);
    report["agglomerative"] = std::move(agg);
    report["kmeans"] = detail::kmeans_json(*c.kmeans);
    report["concordance"] = concordance_section(c, a.corpus);
    report["grid"] = Json{{"axis", to_string(config.axis)},
                          {"axis_order", g.grid.axis_order},
                          {"lane_order", g.grid.lane_order},
                          {"nodes", g.grid.nodes.size()},
                          {"edges", g.grid.edges.size()},
                          {"notes", g.grid.notes},
                          {"traces", detail::traces_json(g.trace_list)},
                          {"persistence", detail::persistence_json(g.persistence)}};
    std::optional<ProgressionReport> progression;
    report["progression"] = progression_section(a, config, progression);
    std::string checks_md;
    report["reference_checks"] = reference_checks(a, config, checks_md);
    writer.write("report.json", detail::dump(report));

    std::string md = "# chronoclust report\n\n";
    md += "- config hash: `" + hash + "`\n- seed: " + std::to_string(config.seed) + "\n";
    md += "- documents: " + join(a.sliced.matrix.document_ids()) + "\n";
    md += "- entities: " + std::to_string(a.sliced.matrix.entity_count()) + "\n";
    md += "- chronology: " + a.corpus.chronology.name + "\n\n";
    md += "## Agglomerative clustering\n\n";
    md += "- linkage: " + std::string(to_string(config.linkage)) + "\n";
    md += "- newick: `" + newick(*c.dendrogram) + "`\n";
    md += "- cut at k=" + std::to_string(config.k) + ": " + clusters_text(c.cut_flat->clusters) + "\n\n";
    md += "## K-means\n\n";
    md += "- k=" + std::to_string(config.k) + ", restarts " + std::to_string(config.restarts) +
          ", metric " + std::string(to_string(config.metric)) + ", normalization " +
          std::string(to_string(config.normalization)) + "\n";
    md += "- clusters: " + clusters_text(c.kmeans->clustering.clusters) + "\n";
    md += "- WCSS: " + fixed6(c.kmeans->clustering.wcss.value_or(0.0)) + "\n\n";
    md += "## Concordance with chronology\n\n";
    if (a.corpus.chronology.empty()) {
      md += "Skipped: no chronology reference.\n\n";
    } else {
      auto section = [&](const char* title, const FlatClustering& flat) {
        md += "### " + std::string(title) + "\n\n";
        try {
          md += to_markdown(concordance(flat, a.corpus.chronology)) + "\n";
        } catch (const Error& e) {
          md += "Skipped: " + std::string(e.what()) + "\n\n";
        }
      };
      section("Agglomerative cut", *c.cut_flat);
      section("K-means", c.kmeans->clustering);
    }
    md += "## Grid persistence\n\n" + to_markdown(g.persistence) + "\n";
    md += "## Geographic progression\n\n";
    if (progression) {
      md += to_markdown(*progression) + "\n";
    } else {
      md += "Skipped: " + report["progression"]["skipped"].get<std::string>() + "\n\n";
    }
    if (!checks_md.empty()) md += "## Reference checks\n\n" + checks_md;
    writer.write("report.md", md);

    r.out += slice_summary(a.sliced);
    r.out += "report: " + std::to_string(r.written.size()) + " files in " + config.out_dir.string() + "\n";
  });
}

bool same_partition(const std::vector<std::vector<std::string>>& a,
                    const std::vector<std::vector<std::string>>& b) {
  auto canon = [](const std::vector<std::vector<std::string>>& p) {
    std::set<std::set<std::string>> out;
    for (const auto& c : p) out.emplace(c.begin(), c.end());
    return out;
  };
  return canon(a) == canon(b);
}

double partition_ari(const std::vector<std::vector<std::string>>& a,
                     const std::vector<std::vector<std::string>>& b) {
  std::map<std::string, std::size_t> la;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& id : a[i]) la[id] = i;
  }
  std::map<std::string, std::size_t> lb;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (const auto& id : b[i]) lb[id] = i;
  }
  if (la.size() != lb.size()) throw Error(ErrorKind::PartitionMismatch, "partitions cover different documents");
  std::vector<std::size_t> xa;
  std::vector<std::size_t> xb;
  for (const auto& [id, label] : la) {
    auto it = lb.find(id);
    if (it == lb.end()) throw Error(ErrorKind::PartitionMismatch, "document `" + id + "` missing");
    xa.push_back(label);
    xb.push_back(it->second);
  }
  return adjusted_rand_index(xa, xb);
}

KMeansSearch search_kmeans_partition(const MentionMatrix& matrix,
                                     const std::vector<std::vector<std::string>>& target,
                                     KMeansOptions options) {
  KMeansSearch search;
  options.k = target.size();
  std::optional<std::size_t> first_exact;
  for (auto metric : {PointMetric::Counts, PointMetric::Presence}) {
    for (auto norm : {Normalization::None, Normalization::L1, Normalization::L2}) {
      options.metric = metric;
      options.normalization = norm;
      KMeansAttempt at;
      at.metric = metric;
      at.normalization = norm;
      at.clustering = kmeans_detailed(document_points(matrix, metric, norm), options).clustering;
      at.ari = partition_ari(at.clustering.clusters, target);
      at.exact = same_partition(at.clustering.clusters, target);
      if (at.exact && !first_exact) first_exact = search.attempts.size();
      search.attempts.push_back(std::move(at));
    }
  }
  if (first_exact) {
    search.best = *first_exact;
  } else {
    for (std::size_t i = 1; i < search.attempts.size(); ++i) {
      if (search.attempts[i].ari > search.attempts[search.best].ari) search.best = i;
    }
  }
  return search;
}

CoclusterSearch search_cocluster(const MentionMatrix& matrix, const std::string& a,
                                 const std::string& b, std::size_t k_min, std::size_t k_max) {
  CoclusterSearch search;
  auto distances = to_distance(similarity_matrix(matrix));
  k_max = std::min(k_max, matrix.document_count());
  for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
    auto tree = agglomerate(distances, linkage);
    for (std::size_t k = std::max<std::size_t>(k_min, 1); k <= k_max; ++k) {
      CoclusterAttempt at;
      at.linkage = linkage;
      at.k = k;
      at.clustering = cut(tree, k);
      at.removal = removal_distance(at.clustering, a, b);
      search.attempts.push_back(std::move(at));
    }
  }
  for (std::size_t i = 1; i < search.attempts.size(); ++i) {
    if (search.attempts[i].removal < search.attempts[search.best].removal) search.best = i;
  }
  return search;
}

std::vector<std::vector<std::string>> reference_river_partition() {
  return {{"M6", "M3", "M7", "M2"}, {"M1", "M5", "M9", "M10"}, {"M4", "M8"}};
}

}  // namespace chronoclust
