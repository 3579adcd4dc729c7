#include "chronoclust/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "chronoclust/error.hpp"

namespace chronoclust {

std::string_view to_string(Algorithm algo) noexcept {
  return algo == Algorithm::KMeans ? "kmeans" : "agglomerative";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) noexcept {
  if (text == "agglomerative") return Algorithm::Agglomerative;
  if (text == "kmeans") return Algorithm::KMeans;
  return std::nullopt;
}

std::string_view to_string(AxisKind axis) noexcept {
  switch (axis) {
    case AxisKind::Chronology: return "chronology";
    case AxisKind::Index: return "index";
    case AxisKind::Geo: return "geo";
  }
  return "chronology";
}

std::optional<AxisKind> parse_axis(std::string_view text) noexcept {
  if (text == "chronology") return AxisKind::Chronology;
  if (text == "index") return AxisKind::Index;
  if (text == "geo") return AxisKind::Geo;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::BadConfig, "line " + std::to_string(line) + ": " + what);
}

// Reads a basic string starting at s[pos] == '"'; advances pos past it.
std::string read_string(std::string_view s, std::size_t& pos, std::size_t line) {
  std::string out;
  ++pos;
  while (pos < s.size() && s[pos] != '"') {
    char c = s[pos++];
    if (c == '\\' && pos < s.size()) {
      char e = s[pos++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: bad(line, std::string("unsupported escape \\") + e);
      }
      continue;
    }
    out += c;
  }
  if (pos >= s.size()) bad(line, "unterminated string");
  ++pos;
  return out;
}

void expect_end(std::string_view s, std::size_t pos, std::size_t line) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
  if (pos < s.size() && s[pos] != '#') bad(line, "unexpected text after value");
}

TomlValue parse_value(std::string_view s, std::size_t line) {
  std::size_t pos = 0;
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  if (pos >= s.size()) bad(line, "missing value");
  if (s[pos] == '"') {
    auto str = read_string(s, pos, line);
    expect_end(s, pos, line);
    return str;
  }
  if (s[pos] == '[') {
    ++pos;
    std::vector<std::string> items;
    while (true) {
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
      if (pos >= s.size()) bad(line, "unterminated array");
      if (s[pos] == ']') {
        ++pos;
        break;
      }
      if (s[pos] != '"') bad(line, "arrays may only hold strings");
      items.push_back(read_string(s, pos, line));
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
      if (pos < s.size() && s[pos] == ',') ++pos;
    }
    expect_end(s, pos, line);
    return items;
  }
  auto hash = s.find('#', pos);
  std::string word = trim(s.substr(pos, hash == std::string_view::npos ? s.npos : hash - pos));
  if (word == "true") return true;
  if (word == "false") return false;
  std::string digits;
  for (char c : word) {
    if (c != '_') digits += c;
  }
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    bad(line, "cannot parse value `" + word + "`");
  }
  return value;
}

const std::string& as_string(const TomlValue& v, const std::string& key) {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  throw Error(ErrorKind::BadConfig, "`" + key + "` must be a string");
}

std::int64_t as_int(const TomlValue& v, const std::string& key) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error(ErrorKind::BadConfig, "`" + key + "` must be an integer");
}

std::size_t as_count(const TomlValue& v, const std::string& key) {
  auto i = as_int(v, key);
  if (i < 0) throw Error(ErrorKind::BadConfig, "`" + key + "` must be nonnegative");
  return static_cast<std::size_t>(i);
}

bool as_bool(const TomlValue& v, const std::string& key) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  throw Error(ErrorKind::BadConfig, "`" + key + "` must be true or false");
}

const std::vector<std::string>& as_list(const TomlValue& v, const std::string& key) {
  if (auto* l = std::get_if<std::vector<std::string>>(&v)) return *l;
  throw Error(ErrorKind::BadConfig, "`" + key + "` must be an array of strings");
}

template <typename T, typename Parser>
T parse_enum(const TomlValue& v, const std::string& key, Parser parser) {
  const auto& s = as_string(v, key);
  auto parsed = parser(s);
  if (!parsed) throw Error(ErrorKind::BadConfig, "`" + key + "` has unsupported value `" + s + "`");
  return *parsed;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

TomlTable parse_toml(std::string_view text) {
  TomlTable table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '[') {
      auto close = s.find(']');
      if (close == std::string::npos) bad(line, "unterminated section header");
      expect_end(s, close + 1, line);
      section = trim(std::string_view(s).substr(1, close - 1));
      if (section.empty()) bad(line, "empty section name");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) bad(line, "expected key = value");
    std::string key = trim(std::string_view(s).substr(0, eq));
    if (key.empty()) bad(line, "empty key");
    std::string full = section.empty() ? key : section + "." + key;
    if (table.count(full)) bad(line, "duplicate key `" + full + "`");
    table.emplace(full, parse_value(std::string_view(s).substr(eq + 1), line));
  }
  return table;
}

std::optional<CategorySet> parse_category_list(const std::vector<std::string>& names) {
  if (names.empty()) return std::nullopt;
  CategorySet set;
  for (const auto& n : names) {
    if (n == "all") return std::nullopt;
    auto c = parse_category(n);
    if (!c) throw Error(ErrorKind::BadConfig, "unknown category `" + n + "`");
    set.insert(*c);
  }
  return set;
}

std::set<std::string> parse_format_list(const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (const auto& n : names) {
    if (n == "all") return kAllFormats;
    if (!kAllFormats.count(n)) throw Error(ErrorKind::BadConfig, "unknown format `" + n + "`");
    out.insert(n);
  }
  return out;
}

void apply_toml(RunConfig& c, const TomlTable& table, const std::filesystem::path& base) {
  for (const auto& [key, v] : table) {
    if (key == "input.entities") c.entities = resolve(base, as_string(v, key));
    else if (key == "input.documents") c.documents = resolve(base, as_string(v, key));
    else if (key == "input.mentions") c.mentions = resolve(base, as_string(v, key));
    else if (key == "input.chronology") c.chronology = resolve(base, as_string(v, key));
    else if (key == "slice.categories") c.categories = parse_category_list(as_list(v, key));
    else if (key == "slice.family_only") c.family_only = as_bool(v, key);
    else if (key == "slice.exclude_docs") c.exclude_docs = as_list(v, key);
    else if (key == "analysis.algo") c.algo = parse_enum<Algorithm>(v, key, parse_algorithm);
    else if (key == "analysis.linkage") c.linkage = parse_enum<Linkage>(v, key, parse_linkage);
    else if (key == "analysis.k") c.k = as_count(v, key);
    else if (key == "analysis.restarts") c.restarts = as_count(v, key);
    else if (key == "analysis.seed") c.seed = static_cast<std::uint64_t>(as_count(v, key));
    else if (key == "analysis.max_iters") c.max_iters = as_count(v, key);
    else if (key == "analysis.metric") c.metric = parse_enum<PointMetric>(v, key, parse_point_metric);
    else if (key == "analysis.normalization")
      c.normalization = parse_enum<Normalization>(v, key, parse_normalization);
    else if (key == "grid.axis") c.axis = parse_enum<AxisKind>(v, key, parse_axis);
    else if (key == "grid.style") c.style = resolve(base, as_string(v, key));
    else if (key == "metrics.weighting")
      c.weighting = parse_enum<GeoWeighting>(v, key, parse_geo_weighting);
    else if (key == "output.out_dir") c.out_dir = resolve(base, as_string(v, key));
    else if (key == "output.formats") c.formats = parse_format_list(as_list(v, key));
    else throw Error(ErrorKind::BadConfig, "unknown key `" + key + "`");
  }
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read config `" + file.string() + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig config;
  apply_toml(config, parse_toml(buf.str()), file.parent_path());
  return config;
}

std::string RunConfig::canonical() const {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += std::string(key) + "=" + value + "\n";
  };
  std::string cats = "all";
  if (categories) {
    cats.clear();
    for (auto c : *categories) cats += (cats.empty() ? "" : ",") + std::string(to_string(c));
  }
  std::string excluded;
  for (const auto& d : exclude_docs) excluded += (excluded.empty() ? "" : ",") + d;
  line("slice.categories", cats);
  line("slice.family_only", family_only ? "true" : "false");
  line("slice.exclude_docs", excluded);
  line("analysis.algo", std::string(to_string(algo)));
  line("analysis.linkage", std::string(to_string(linkage)));
  line("analysis.k", std::to_string(k));
  line("analysis.restarts", std::to_string(restarts));
  line("analysis.max_iters", std::to_string(max_iters));
  line("analysis.metric", std::string(to_string(metric)));
  line("analysis.normalization", std::string(to_string(normalization)));
  line("grid.axis", std::string(to_string(axis)));
  line("metrics.weighting", std::string(to_string(weighting)));
  return out;
}

}  // namespace chronoclust
