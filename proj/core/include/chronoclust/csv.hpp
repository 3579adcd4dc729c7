#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chronoclust::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::size_t header_line = 0;
  std::vector<Row> rows;
};

/// Parses comma-separated UTF-8 text. Lines whose first character is '#'
/// and blank lines are skipped. Double-quoted fields may contain commas,
/// newlines and doubled quotes. The first record is the header.
/// Throws Error(MalformedCsv) on an unterminated quote or empty input.
Table parse(std::string_view text, std::string_view source = {});

/// Quotes a field only when it contains a comma, quote, newline or a
/// leading '#'.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace chronoclust::csv
