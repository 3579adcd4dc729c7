#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "chronoclust/config.hpp"
#include "chronoclust/error.hpp"
#include "chronoclust/pipeline.hpp"

namespace cc = chronoclust;

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  std::vector<std::string> formats;

  std::optional<std::string> entities, documents, mentions, chronology;

  std::vector<std::string> categories;
  bool family_only = false;
  std::vector<std::string> exclude_docs;

  std::optional<std::string> algo, linkage, metric, normalize, axis, style, weighting;
  std::optional<std::size_t> k, restarts, max_iters;
  std::optional<std::uint64_t> seed;
};

template <typename T, typename Parser>
T parse_or_throw(const std::string& flag, const std::string& text, Parser parser) {
  auto v = parser(text);
  if (!v) throw cc::Error(cc::ErrorKind::BadConfig, "unsupported value `" + text + "` for " + flag);
  return *v;
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      auto comma = item.find(',', start);
      auto part = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

// Config file first, then command-line overrides.
cc::RunConfig build_config(const Flags& f) {
  cc::RunConfig c = f.config ? cc::load_config(*f.config) : cc::RunConfig{};
  if (f.entities) c.entities = *f.entities;
  if (f.documents) c.documents = *f.documents;
  if (f.mentions) c.mentions = *f.mentions;
  if (f.chronology) c.chronology = *f.chronology;
  if (!f.categories.empty()) c.categories = cc::parse_category_list(split_commas(f.categories));
  if (f.family_only) c.family_only = true;
  if (!f.exclude_docs.empty()) c.exclude_docs = split_commas(f.exclude_docs);
  if (f.algo) c.algo = parse_or_throw<cc::Algorithm>("--algo", *f.algo, cc::parse_algorithm);
  if (f.linkage) c.linkage = parse_or_throw<cc::Linkage>("--linkage", *f.linkage, cc::parse_linkage);
  if (f.metric) c.metric = parse_or_throw<cc::PointMetric>("--metric", *f.metric, cc::parse_point_metric);
  if (f.normalize) {
    c.normalization = parse_or_throw<cc::Normalization>("--normalize", *f.normalize, cc::parse_normalization);
  }
  if (f.axis) c.axis = parse_or_throw<cc::AxisKind>("--axis", *f.axis, cc::parse_axis);
  if (f.style) c.style = *f.style;
  if (f.weighting) {
    c.weighting = parse_or_throw<cc::GeoWeighting>("--weighting", *f.weighting, cc::parse_geo_weighting);
  }
  if (f.k) c.k = *f.k;
  if (f.restarts) c.restarts = *f.restarts;
  if (f.max_iters) c.max_iters = *f.max_iters;
  if (f.seed) c.seed = *f.seed;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (!f.formats.empty()) c.formats = cc::parse_format_list(split_commas(f.formats));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chronoclust: clustering, grid networks and chronology metrics for mention corpora"};
  app.fallthrough();
  app.require_subcommand(1);
  Flags f;

  app.add_option("--config", f.config, "TOML run config; flags override its values");
  app.add_option("--out-dir", f.out_dir, "Output directory");
  app.add_option("--format", f.formats, "Artifact formats to write (csv,json,nwk,md,dot,graphml,svg or all)");

  auto* input = "Inputs";
  app.add_option("--entities", f.entities, "entities.csv")->group(input);
  app.add_option("--documents", f.documents, "documents.csv")->group(input);
  app.add_option("--mentions", f.mentions, "mentions.csv")->group(input);
  app.add_option("--chronology", f.chronology, "chronology.csv override")->group(input);

  auto* sl = "Slice";
  app.add_option("--categories", f.categories, "Entity categories: single,dual,group,river or all")->group(sl);
  app.add_flag("--family-only", f.family_only, "Keep only family documents")->group(sl);
  app.add_option("--exclude-doc", f.exclude_docs, "Document ids to leave out (repeatable)")->group(sl);

  auto* an = "Analysis";
  app.add_option("--algo", f.algo, "agglomerative or kmeans")->group(an);
  app.add_option("--linkage", f.linkage, "single, complete or average")->group(an);
  app.add_option("--k", f.k, "Number of flat clusters")->group(an);
  app.add_option("--restarts", f.restarts, "k-means restarts")->group(an);
  app.add_option("--seed", f.seed, "k-means base seed")->group(an);
  app.add_option("--max-iters", f.max_iters, "k-means iteration cap")->group(an);
  app.add_option("--metric", f.metric, "k-means point coordinates: counts or presence")->group(an);
  app.add_option("--normalize", f.normalize, "k-means row normalization: none, l1 or l2")->group(an);

  auto* gr = "Grid and metrics";
  app.add_option("--axis", f.axis, "chronology, index or geo")->group(gr);
  app.add_option("--style", f.style, "JSON style file for SVG export")->group(gr);
  app.add_option("--weighting", f.weighting, "Geo progression weighting: presence or counts")->group(gr);

  auto* validate = app.add_subcommand("validate", "Parse and validate the corpus");
  auto* cluster = app.add_subcommand("cluster", "Similarity, dendrogram and flat clusters");
  auto* grid = app.add_subcommand("grid", "Grid network exports and trace report");
  auto* report = app.add_subcommand("report", "Full pipeline with a combined report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cc::kExitDomain;
  }

  cc::CommandResult result;
  try {
    auto config = build_config(f);
    if (validate->parsed()) result = cc::cmd_validate(config);
    else if (cluster->parsed()) result = cc::cmd_cluster(config);
    else if (grid->parsed()) result = cc::cmd_grid(config);
    else if (report->parsed()) result = cc::cmd_report(config);
  } catch (const cc::Error& e) {
    result.exit_code = e.kind() == cc::ErrorKind::Io ? cc::kExitIo : cc::kExitDomain;
    result.err = std::string(e.what()) + "\n";
  }
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
