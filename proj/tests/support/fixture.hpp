#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chronoclust/config.hpp"
#include "chronoclust/corpus.hpp"

namespace fixture {

inline std::filesystem::path source_dir() { return CHRONOCLUST_SOURCE_DIR; }
inline std::filesystem::path dir() { return source_dir() / "data" / "fixture-3x4"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string golden(const std::string& name) {
  return slurp(std::filesystem::path(CHRONOCLUST_GOLDEN_DIR) / name);
}

inline chronoclust::CorpusText text() {
  return {slurp(dir() / "entities.csv"), slurp(dir() / "documents.csv"), slurp(dir() / "mentions.csv"),
          std::nullopt};
}

inline chronoclust::Corpus corpus() { return chronoclust::parse_corpus(text()); }

inline chronoclust::RunConfig config(const std::filesystem::path& out_dir) {
  auto c = chronoclust::load_config(dir() / "run.toml");
  c.out_dir = out_dir;
  return c;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("chronoclust_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixture
