#include "chronoclust/csv.hpp"

#include "chronoclust/error.hpp"

namespace chronoclust::csv {

namespace {

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

Table parse(std::string_view text, std::string_view source) {
  // Strip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Row> records;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    if (raw.empty() || raw.front() == '#' || is_blank(raw)) {
      pos = eol == std::string_view::npos ? text.size() : eol + 1;
      ++line;
      continue;
    }

    Row row;
    row.line = line;
    std::string field;
    bool quoted = false;
    bool done = false;
    while (!done) {
      if (pos >= text.size()) {
        if (quoted) {
          throw Error(ErrorKind::MalformedCsv,
                      std::string(source) + ":" + std::to_string(row.line) + ": unterminated quote");
        }
        row.fields.push_back(std::move(field));
        done = true;
        break;
      }
      char c = text[pos++];
      if (quoted) {
        if (c == '"') {
          if (pos < text.size() && text[pos] == '"') {
            field += '"';
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
        }
        continue;
      }
      switch (c) {
        case '"':
          quoted = true;
          break;
        case ',':
          row.fields.push_back(std::move(field));
          field.clear();
          break;
        case '\r':
          break;
        case '\n':
          row.fields.push_back(std::move(field));
          ++line;
          done = true;
          break;
        default:
          field += c;
      }
    }
    records.push_back(std::move(row));
  }

  if (records.empty()) {
    throw Error(ErrorKind::MalformedCsv, std::string(source) + ": missing header row");
  }
  Table table;
  table.header = std::move(records.front().fields);
  table.header_line = records.front().line;
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

std::string escape(std::string_view field) {
  bool needs = !field.empty() && field.front() == '#';
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') needs = true;
  }
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace chronoclust::csv
