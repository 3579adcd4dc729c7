#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chronoclust/chronometrics.hpp"
#include "chronoclust/clustering.hpp"
#include "chronoclust/corpus.hpp"

namespace chronoclust {

enum class Algorithm { Agglomerative, KMeans };
enum class AxisKind { Chronology, Index, Geo };

std::string_view to_string(Algorithm algo) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view text) noexcept;
std::string_view to_string(AxisKind axis) noexcept;
std::optional<AxisKind> parse_axis(std::string_view text) noexcept;

/// Artifact formats a run may write.
inline const std::set<std::string> kAllFormats = {"csv", "dot", "graphml", "json", "md", "nwk", "svg"};

/// Everything a run needs. Relative paths in a config file resolve against
/// the file's directory.
struct RunConfig {
  // inputs
  std::filesystem::path entities;
  std::filesystem::path documents;
  std::filesystem::path mentions;
  std::optional<std::filesystem::path> chronology;

  // slice
  std::optional<CategorySet> categories;  // empty optional = all categories
  bool family_only = false;
  std::vector<std::string> exclude_docs;

  // analysis
  Algorithm algo = Algorithm::Agglomerative;
  Linkage linkage = Linkage::Average;
  std::size_t k = 3;
  std::size_t restarts = 10;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_iters = 100;
  PointMetric metric = PointMetric::Counts;
  Normalization normalization = Normalization::None;

  // grid and metrics
  AxisKind axis = AxisKind::Chronology;
  std::optional<std::filesystem::path> style;
  GeoWeighting weighting = GeoWeighting::Presence;

  // output
  std::filesystem::path out_dir = "out";
  std::set<std::string> formats = kAllFormats;

  /// Canonical text of the analysis-relevant settings. Seed, paths and
  /// output settings are left out so that reports from the same inputs
  /// differ only where the seed matters.
  std::string canonical() const;
};

/// Minimal TOML: [section] headers, key = value with strings, integers,
/// booleans and arrays of strings, '#' comments.
using TomlValue = std::variant<std::string, std::int64_t, bool, std::vector<std::string>>;
using TomlTable = std::map<std::string, TomlValue>;  // keys are "section.key"

/// Throws Error(BadConfig) with the offending line.
TomlTable parse_toml(std::string_view text);

/// Applies a parsed table to a config; unknown keys are rejected.
void apply_toml(RunConfig& config, const TomlTable& table,
                const std::filesystem::path& base_dir = {});

/// Reads and applies a config file. Throws Error(Io) if unreadable.
RunConfig load_config(const std::filesystem::path& file);

std::optional<CategorySet> parse_category_list(const std::vector<std::string>& names);
std::set<std::string> parse_format_list(const std::vector<std::string>& names);

}  // namespace chronoclust
