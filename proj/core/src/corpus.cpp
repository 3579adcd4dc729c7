#include "chronoclust/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "chronoclust/csv.hpp"
#include "chronoclust/error.hpp"

namespace chronoclust {

namespace {

constexpr std::string_view kEntitiesFile = "entities.csv";
constexpr std::string_view kDocumentsFile = "documents.csv";
constexpr std::string_view kMentionsFile = "mentions.csv";

const std::vector<std::string> kEntityHeader = {"id", "display_name", "category",
                                                "members", "geo_ordinal", "notes"};
const std::vector<std::string> kDocumentHeader = {"id", "index", "is_family", "stage", "rank"};
const std::vector<std::string> kMentionHeader = {"entity_id", "document_id", "count"};
const std::vector<std::string> kChronologyHeader = {"document_id", "stage", "rank"};

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  Int value{};
  auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

std::optional<bool> parse_bool(std::string_view s) {
  std::string t = trim(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "y") return true;
  if (t == "false" || t == "0" || t == "no" || t == "n" || t.empty()) return false;
  return std::nullopt;
}

bool valid_token(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ' ' || c == '\t' || c == ',' || c == ';' || c == '@' || c == '"' || c == '\n') {
      return false;
    }
  }
  return true;
}

std::vector<std::string> split_members(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(';', pos);
    std::string item = trim(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos));
    if (!item.empty()) out.push_back(std::move(item));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

class IssueSink {
 public:
  void add(ErrorKind kind, std::string message, std::string_view source = {},
           std::size_t line = 0) {
    issues_.push_back(Issue{kind, std::move(message), std::string(source), line});
  }
  bool empty() const { return issues_.empty(); }
  std::vector<Issue> take() { return std::move(issues_); }

 private:
  std::vector<Issue> issues_;
};

// Parses a table and checks its header; returns nullopt (with an issue) on
// structural failure so the other files can still be checked.
std::optional<csv::Table> load_table(std::string_view text, std::string_view source,
                                     const std::vector<std::string>& expected, IssueSink& sink) {
  csv::Table table;
  try {
    table = csv::parse(text, source);
  } catch (const Error& e) {
    sink.add(ErrorKind::MalformedCsv, e.what(), source);
    return std::nullopt;
  }
  std::vector<std::string> header;
  for (const auto& h : table.header) header.push_back(trim(h));
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    sink.add(ErrorKind::MalformedCsv, "header must be `" + want + "`", source, table.header_line);
    return std::nullopt;
  }
  return table;
}

// Rows may omit trailing optional fields but may not carry extra ones.
bool check_arity(const csv::Row& row, std::size_t required, std::size_t total,
                 std::string_view source, IssueSink& sink) {
  if (row.fields.size() < required || row.fields.size() > total) {
    sink.add(ErrorKind::MalformedCsv,
             "expected " + std::to_string(total) + " fields, found " +
                 std::to_string(row.fields.size()),
             source, row.line);
    return false;
  }
  return true;
}

std::string field(const csv::Row& row, std::size_t i) {
  return i < row.fields.size() ? trim(row.fields[i]) : std::string();
}

std::vector<EntityRecord> parse_entities(std::string_view text, IssueSink& sink) {
  std::vector<EntityRecord> out;
  auto table = load_table(text, kEntitiesFile, kEntityHeader, sink);
  if (!table) return out;

  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& row : table->rows) {
    if (!check_arity(row, 3, kEntityHeader.size(), kEntitiesFile, sink)) continue;
    EntityRecord rec;
    rec.id = field(row, 0);
    rec.display_name = field(row, 1);
    rec.notes = field(row, 5);
    bool ok = true;
    if (!valid_token(rec.id)) {
      sink.add(ErrorKind::MalformedCsv, "invalid entity id `" + rec.id + "`", kEntitiesFile, row.line);
      ok = false;
    }
    auto category = parse_category(field(row, 2));
    if (!category) {
      sink.add(ErrorKind::MalformedCsv, "unknown category `" + field(row, 2) + "`", kEntitiesFile,
               row.line);
      ok = false;
    } else {
      rec.category = *category;
    }
    rec.members = split_members(field(row, 3));
    std::string geo = field(row, 4);
    if (!geo.empty()) {
      auto ordinal = parse_int<int>(geo);
      if (!ordinal || *ordinal < 1) {
        sink.add(ErrorKind::MalformedCsv, "geo_ordinal must be an integer >= 1, got `" + geo + "`",
                 kEntitiesFile, row.line);
        ok = false;
      } else {
        rec.geo_ordinal = *ordinal;
      }
    }
    if (!ok) continue;
    if (auto [it, inserted] = seen.emplace(rec.id, row.line); !inserted) {
      sink.add(ErrorKind::DuplicateId,
               "entity `" + rec.id + "` already defined on line " + std::to_string(it->second),
               kEntitiesFile, row.line);
      continue;
    }
    out.push_back(std::move(rec));
  }

  // Cross-record invariants need the full catalog.
  std::unordered_map<std::string, const EntityRecord*> by_id;
  for (const auto& e : out) by_id.emplace(e.id, &e);
  for (const auto& e : out) {
    const std::string where = "entity `" + e.id + "`";
    switch (e.category) {
      case Category::Dual:
        if (e.members.size() != 2) {
          sink.add(ErrorKind::InvalidRecord,
                   where + ": a dual needs exactly 2 members, has " +
                       std::to_string(e.members.size()),
                   kEntitiesFile);
        }
        break;
      case Category::Group:
        if (e.members.size() < 2) {
          sink.add(ErrorKind::InvalidRecord,
                   where + ": a group needs at least 2 members, has " +
                       std::to_string(e.members.size()),
                   kEntitiesFile);
        }
        break;
      default:
        if (!e.members.empty()) {
          sink.add(ErrorKind::InvalidRecord,
                   where + ": only duals and groups may list members", kEntitiesFile);
        }
    }
    for (const auto& m : e.members) {
      auto it = by_id.find(m);
      if (it == by_id.end()) {
        sink.add(ErrorKind::UnknownReference, where + ": member `" + m + "` is not cataloged",
                 kEntitiesFile);
      } else if (it->second->category != Category::Single) {
        sink.add(ErrorKind::InvalidRecord, where + ": member `" + m + "` is not a single entity",
                 kEntitiesFile);
      }
    }
    if (e.geo_ordinal && e.category != Category::River) {
      sink.add(ErrorKind::InvalidRecord, where + ": geo_ordinal is only allowed on rivers",
               kEntitiesFile);
    }
  }
  return out;
}

std::vector<DocumentRecord> parse_documents(std::string_view text, IssueSink& sink) {
  std::vector<DocumentRecord> out;
  auto table = load_table(text, kDocumentsFile, kDocumentHeader, sink);
  if (!table) return out;

  std::unordered_set<std::string> ids;
  std::unordered_set<int> indices;
  for (const auto& row : table->rows) {
    if (!check_arity(row, 2, kDocumentHeader.size(), kDocumentsFile, sink)) continue;
    DocumentRecord rec;
    rec.id = field(row, 0);
    bool ok = true;
    if (!valid_token(rec.id)) {
      sink.add(ErrorKind::MalformedCsv, "invalid document id `" + rec.id + "`", kDocumentsFile,
               row.line);
      ok = false;
    }
    auto index = parse_int<int>(field(row, 1));
    if (!index) {
      sink.add(ErrorKind::MalformedCsv, "index must be an integer, got `" + field(row, 1) + "`",
               kDocumentsFile, row.line);
      ok = false;
    } else {
      rec.index = *index;
    }
    auto family = parse_bool(field(row, 2));
    if (!family) {
      sink.add(ErrorKind::MalformedCsv, "is_family must be a boolean, got `" + field(row, 2) + "`",
               kDocumentsFile, row.line);
      ok = false;
    } else {
      rec.is_family = *family;
    }
    std::string stage = field(row, 3);
    std::string rank = field(row, 4);
    if (!stage.empty()) rec.stage = stage;
    if (!rank.empty()) {
      auto r = parse_int<int>(rank);
      if (!r || *r < 1) {
        sink.add(ErrorKind::MalformedCsv, "rank must be an integer >= 1, got `" + rank + "`",
                 kDocumentsFile, row.line);
        ok = false;
      } else {
        rec.rank = *r;
      }
    }
    if (ok && rec.stage.has_value() != rec.rank.has_value()) {
      sink.add(ErrorKind::InvalidRecord, "stage and rank must be given together", kDocumentsFile,
               row.line);
      ok = false;
    }
    if (!ok) continue;
    if (!ids.insert(rec.id).second) {
      sink.add(ErrorKind::DuplicateId, "document `" + rec.id + "` already defined",
               kDocumentsFile, row.line);
      continue;
    }
    if (!indices.insert(rec.index).second) {
      sink.add(ErrorKind::DuplicateId, "document index " + std::to_string(rec.index) + " reused",
               kDocumentsFile, row.line);
      continue;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

struct MentionCell {
  std::size_t entity;
  std::size_t document;
  std::int64_t count;
};

std::vector<MentionCell> parse_mentions(std::string_view text,
                                        const std::vector<EntityRecord>& entities,
                                        const std::vector<DocumentRecord>& documents,
                                        IssueSink& sink) {
  std::vector<MentionCell> out;
  auto table = load_table(text, kMentionsFile, kMentionHeader, sink);
  if (!table) return out;

  std::unordered_map<std::string, std::size_t> entity_pos;
  for (std::size_t i = 0; i < entities.size(); ++i) entity_pos.emplace(entities[i].id, i);
  std::unordered_map<std::string, std::size_t> doc_pos;
  for (std::size_t i = 0; i < documents.size(); ++i) doc_pos.emplace(documents[i].id, i);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (const auto& row : table->rows) {
    if (!check_arity(row, kMentionHeader.size(), kMentionHeader.size(), kMentionsFile, sink)) {
      continue;
    }
    std::string entity = field(row, 0);
    std::string document = field(row, 1);
    bool ok = true;
    auto count = parse_int<std::int64_t>(field(row, 2));
    if (!count) {
      sink.add(ErrorKind::MalformedCsv, "count must be an integer, got `" + field(row, 2) + "`",
               kMentionsFile, row.line);
      ok = false;
    } else if (*count < 0) {
      sink.add(ErrorKind::NegativeCount,
               "count " + std::to_string(*count) + " for (" + entity + ", " + document + ")",
               kMentionsFile, row.line);
      ok = false;
    }
    auto e = entity_pos.find(entity);
    if (e == entity_pos.end()) {
      sink.add(ErrorKind::UnknownReference, "entity `" + entity + "` is not cataloged",
               kMentionsFile, row.line);
      ok = false;
    }
    auto d = doc_pos.find(document);
    if (d == doc_pos.end()) {
      sink.add(ErrorKind::UnknownReference, "document `" + document + "` is not cataloged",
               kMentionsFile, row.line);
      ok = false;
    }
    if (!ok) continue;
    auto key = std::make_pair(e->second, d->second);
    if (auto [it, inserted] = seen.emplace(key, row.line); !inserted) {
      sink.add(ErrorKind::DuplicateId,
               "mention (" + entity + ", " + document + ") already given on line " +
                   std::to_string(it->second),
               kMentionsFile, row.line);
      continue;
    }
    out.push_back({e->second, d->second, *count});
  }
  return out;
}

void check_chronology(const ChronologyReference& chronology, IssueSink& sink,
                      std::string_view source) {
  try {
    chronology.validate();
  } catch (const ValidationError& e) {
    for (auto issue : e.issues()) {
      if (issue.source.empty()) issue.source = std::string(source);
      sink.add(issue.kind, issue.message, issue.source, issue.line);
    }
  }
}

ChronologyReference chronology_from_documents(const std::vector<DocumentRecord>& documents) {
  ChronologyReference ref;
  ref.name = std::string(kDocumentsFile);
  std::map<std::string, int> first_rank;
  for (const auto& d : documents) {
    if (!d.stage) continue;
    ref.assignment.emplace(d.id, StageAssignment{*d.stage, *d.rank});
    auto [it, inserted] = first_rank.emplace(*d.stage, *d.rank);
    if (!inserted) it->second = std::min(it->second, *d.rank);
  }
  std::vector<std::pair<int, std::string>> order;
  for (const auto& [stage, rank] : first_rank) order.emplace_back(rank, stage);
  std::sort(order.begin(), order.end());
  for (auto& [rank, stage] : order) ref.stages.push_back(std::move(stage));
  return ref;
}

}  // namespace

std::string_view to_string(Category category) noexcept {
  switch (category) {
    case Category::Single: return "single";
    case Category::Dual: return "dual";
    case Category::Group: return "group";
    case Category::River: return "river";
  }
  return "single";
}

std::optional<Category> parse_category(std::string_view text) noexcept {
  if (text == "single") return Category::Single;
  if (text == "dual") return Category::Dual;
  if (text == "group") return Category::Group;
  if (text == "river") return Category::River;
  return std::nullopt;
}

MentionMatrix::MentionMatrix(std::vector<std::string> entity_ids,
                             std::vector<std::string> document_ids,
                             std::vector<std::int64_t> counts)
    : entity_ids_(std::move(entity_ids)),
      document_ids_(std::move(document_ids)),
      counts_(std::move(counts)) {
  if (counts_.size() != entity_ids_.size() * document_ids_.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "matrix has " + std::to_string(counts_.size()) + " cells for " +
                    std::to_string(entity_ids_.size()) + "x" +
                    std::to_string(document_ids_.size()));
  }
  for (auto c : counts_) {
    if (c < 0) throw Error(ErrorKind::NegativeCount, "matrix cell " + std::to_string(c));
  }
}

std::optional<std::size_t> MentionMatrix::entity_index(std::string_view id) const noexcept {
  auto it = std::find(entity_ids_.begin(), entity_ids_.end(), id);
  if (it == entity_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - entity_ids_.begin());
}

std::optional<std::size_t> MentionMatrix::document_index(std::string_view id) const noexcept {
  auto it = std::find(document_ids_.begin(), document_ids_.end(), id);
  if (it == document_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - document_ids_.begin());
}

std::int64_t MentionMatrix::row_total(std::size_t entity) const noexcept {
  std::int64_t total = 0;
  for (std::size_t d = 0; d < document_count(); ++d) total += at(entity, d);
  return total;
}

std::int64_t MentionMatrix::column_total(std::size_t document) const noexcept {
  std::int64_t total = 0;
  for (std::size_t e = 0; e < entity_count(); ++e) total += at(e, document);
  return total;
}

bool MentionMatrix::is_binary() const noexcept {
  return std::all_of(counts_.begin(), counts_.end(), [](auto c) { return c == 0 || c == 1; });
}

std::optional<std::size_t> ChronologyReference::stage_position(
    std::string_view stage) const noexcept {
  auto it = std::find(stages.begin(), stages.end(), stage);
  if (it == stages.end()) return std::nullopt;
  return static_cast<std::size_t>(it - stages.begin());
}

const StageAssignment* ChronologyReference::find(std::string_view document_id) const noexcept {
  auto it = assignment.find(std::string(document_id));
  return it == assignment.end() ? nullptr : &it->second;
}

void ChronologyReference::validate() const {
  std::vector<Issue> issues;
  auto add = [&](std::string msg) {
    issues.push_back(Issue{ErrorKind::InvalidChronology, std::move(msg), {}, 0});
  };
  std::set<std::string> unique(stages.begin(), stages.end());
  if (unique.size() != stages.size()) add("stage list of `" + name + "` repeats a label");

  // Per stage: the rank interval its documents occupy.
  std::vector<std::optional<std::pair<int, int>>> span(stages.size());
  for (const auto& [doc, a] : assignment) {
    auto pos = stage_position(a.stage);
    if (!pos) {
      add("document `" + doc + "` uses unlisted stage `" + a.stage + "`");
      continue;
    }
    if (a.rank < 1) add("document `" + doc + "` has rank " + std::to_string(a.rank) + " < 1");
    auto& s = span[*pos];
    if (!s) {
      s = std::make_pair(a.rank, a.rank);
    } else {
      s->first = std::min(s->first, a.rank);
      s->second = std::max(s->second, a.rank);
    }
  }
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!span[i]) continue;
    if (prev && span[*prev]->second >= span[i]->first) {
      add("ranks of stage `" + stages[*prev] + "` (up to " + std::to_string(span[*prev]->second) +
          ") overlap later stage `" + stages[i] + "` (from " + std::to_string(span[i]->first) +
          ")");
    }
    prev = i;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ChronologyReference builtin_chronology() {
  ChronologyReference ref;
  ref.name = "talageri";
  ref.stages = {"early", "middle", "late"};
  const std::pair<const char*, StageAssignment> rows[] = {
      {"M6", {"early", 1}},  {"M3", {"early", 2}}, {"M7", {"early", 3}},
      {"M4", {"middle", 4}}, {"M2", {"middle", 5}}, {"M5", {"late", 6}},
      {"M8", {"late", 7}},   {"M1", {"late", 8}},  {"M9", {"late", 9}},
      {"M10", {"late", 10}},
  };
  for (const auto& [doc, a] : rows) ref.assignment.emplace(doc, a);
  return ref;
}

const EntityRecord* Corpus::find_entity(std::string_view id) const noexcept {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const DocumentRecord* Corpus::find_document(std::string_view id) const noexcept {
  for (const auto& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

ChronologyReference parse_chronology(std::string_view text, std::string name) {
  IssueSink sink;
  ChronologyReference ref;
  ref.name = name;
  auto table = load_table(text, name, kChronologyHeader, sink);
  if (table) {
    std::vector<DocumentRecord> pseudo;
    for (const auto& row : table->rows) {
      if (!check_arity(row, 3, 3, name, sink)) continue;
      DocumentRecord d;
      d.id = field(row, 0);
      std::string stage = field(row, 1);
      auto rank = parse_int<int>(field(row, 2));
      if (d.id.empty() || stage.empty() || !rank || *rank < 1) {
        sink.add(ErrorKind::MalformedCsv, "expected document_id,stage,rank with rank >= 1", name,
                 row.line);
        continue;
      }
      if (std::any_of(pseudo.begin(), pseudo.end(), [&](const auto& p) { return p.id == d.id; })) {
        sink.add(ErrorKind::DuplicateId, "document `" + d.id + "` assigned twice", name, row.line);
        continue;
      }
      d.stage = stage;
      d.rank = *rank;
      pseudo.push_back(std::move(d));
    }
    ref = chronology_from_documents(pseudo);
    ref.name = name;
    check_chronology(ref, sink, name);
  }
  if (!sink.empty()) throw ValidationError(sink.take());
  return ref;
}

Corpus parse_corpus(std::string_view entity_csv, std::string_view document_csv,
                    std::string_view mention_csv, std::optional<std::string_view> chronology_csv) {
  IssueSink sink;
  Corpus corpus;
  corpus.entities = parse_entities(entity_csv, sink);
  corpus.documents = parse_documents(document_csv, sink);
  auto cells = parse_mentions(mention_csv, corpus.entities, corpus.documents, sink);

  // Columns in canonical index order; rows for every entity with a mention row.
  std::vector<std::size_t> doc_order(corpus.documents.size());
  for (std::size_t i = 0; i < doc_order.size(); ++i) doc_order[i] = i;
  std::sort(doc_order.begin(), doc_order.end(), [&](auto a, auto b) {
    return corpus.documents[a].index < corpus.documents[b].index;
  });
  std::vector<std::size_t> column_of(corpus.documents.size());
  std::vector<std::string> doc_ids;
  for (std::size_t col = 0; col < doc_order.size(); ++col) {
    column_of[doc_order[col]] = col;
    doc_ids.push_back(corpus.documents[doc_order[col]].id);
  }
  std::vector<bool> mentioned(corpus.entities.size(), false);
  for (const auto& c : cells) mentioned[c.entity] = true;
  std::vector<std::size_t> row_of(corpus.entities.size(), 0);
  std::vector<std::string> entity_ids;
  for (std::size_t i = 0; i < corpus.entities.size(); ++i) {
    if (!mentioned[i]) continue;
    row_of[i] = entity_ids.size();
    entity_ids.push_back(corpus.entities[i].id);
  }
  std::vector<std::int64_t> counts(entity_ids.size() * doc_ids.size(), 0);
  for (const auto& c : cells) counts[row_of[c.entity] * doc_ids.size() + column_of[c.document]] = c.count;
  corpus.matrix = MentionMatrix(std::move(entity_ids), std::move(doc_ids), std::move(counts));

  if (corpus.documents.empty() && sink.empty()) {
    sink.add(ErrorKind::InvalidRecord, "no documents cataloged", kDocumentsFile);
  }
  for (std::size_t d = 0; d < corpus.matrix.document_count(); ++d) {
    if (corpus.matrix.column_total(d) == 0) {
      sink.add(ErrorKind::EmptyDocument,
               "document `" + corpus.matrix.document_ids()[d] + "` has zero total mentions",
               kMentionsFile);
    }
  }

  // Effective chronology: override file, else declared stages, else the
  // built-in Mandala ordering when every document belongs to it.
  if (chronology_csv) {
    try {
      corpus.chronology = parse_chronology(*chronology_csv);
    } catch (const ValidationError& e) {
      for (const auto& issue : e.issues()) sink.add(issue.kind, issue.message, issue.source, issue.line);
    }
  } else if (std::any_of(corpus.documents.begin(), corpus.documents.end(),
                         [](const auto& d) { return d.stage.has_value(); })) {
    corpus.chronology = chronology_from_documents(corpus.documents);
    check_chronology(corpus.chronology, sink, kDocumentsFile);
  } else {
    auto builtin = builtin_chronology();
    bool covered = !corpus.documents.empty() &&
                   std::all_of(corpus.documents.begin(), corpus.documents.end(),
                               [&](const auto& d) { return builtin.find(d.id) != nullptr; });
    if (covered) {
      for (auto it = builtin.assignment.begin(); it != builtin.assignment.end();) {
        it = corpus.find_document(it->first) ? std::next(it) : builtin.assignment.erase(it);
      }
      corpus.chronology = std::move(builtin);
    } else {
      corpus.chronology.name = "none";
    }
  }
  for (const auto& [doc, a] : corpus.chronology.assignment) {
    if (!corpus.find_document(doc)) {
      sink.add(ErrorKind::UnknownReference,
               "chronology assigns uncataloged document `" + doc + "`", corpus.chronology.name);
    }
  }

  if (!sink.empty()) throw ValidationError(sink.take());
  return corpus;
}

Corpus parse_corpus(const CorpusText& text) {
  std::optional<std::string_view> chronology;
  if (text.chronology) chronology = *text.chronology;
  return parse_corpus(text.entities, text.documents, text.mentions, chronology);
}

std::string serialize_chronology(const ChronologyReference& chronology) {
  std::vector<std::pair<int, std::string>> order;
  for (const auto& [doc, a] : chronology.assignment) order.emplace_back(a.rank, doc);
  std::sort(order.begin(), order.end());
  std::string out = csv::join_row(kChronologyHeader) + "\n";
  for (const auto& [rank, doc] : order) {
    out += csv::join_row({doc, chronology.assignment.at(doc).stage, std::to_string(rank)}) + "\n";
  }
  return out;
}

CorpusText serialize_corpus(const Corpus& corpus) {
  CorpusText text;
  text.entities = csv::join_row(kEntityHeader) + "\n";
  for (const auto& e : corpus.entities) {
    std::string members;
    for (const auto& m : e.members) members += (members.empty() ? "" : ";") + m;
    text.entities += csv::join_row({e.id, e.display_name, std::string(to_string(e.category)),
                                    members, e.geo_ordinal ? std::to_string(*e.geo_ordinal) : "",
                                    e.notes}) +
                     "\n";
  }
  text.documents = csv::join_row(kDocumentHeader) + "\n";
  for (const auto& d : corpus.documents) {
    text.documents += csv::join_row({d.id, std::to_string(d.index), d.is_family ? "true" : "false",
                                     d.stage.value_or(""),
                                     d.rank ? std::to_string(*d.rank) : ""}) +
                      "\n";
  }
  const auto& m = corpus.matrix;
  text.mentions = csv::join_row(kMentionHeader) + "\n";
  for (std::size_t e = 0; e < m.entity_count(); ++e) {
    bool any = false;
    for (std::size_t d = 0; d < m.document_count(); ++d) {
      if (m.at(e, d) == 0) continue;
      any = true;
      text.mentions += csv::join_row({m.entity_ids()[e], m.document_ids()[d],
                                      std::to_string(m.at(e, d))}) +
                       "\n";
    }
    // Keeps an all-zero row in the matrix on re-parse.
    if (!any && m.document_count() > 0) {
      text.mentions += csv::join_row({m.entity_ids()[e], m.document_ids()[0], "0"}) + "\n";
    }
  }
  if (corpus.chronology.name == "chronology.csv") {
    text.chronology = serialize_chronology(corpus.chronology);
  }
  return text;
}

SliceResult slice(const Corpus& corpus, const MentionMatrix& matrix,
                  const std::optional<CategorySet>& categories, const DocumentFilter& documents) {
  std::vector<std::size_t> rows;
  for (std::size_t e = 0; e < matrix.entity_count(); ++e) {
    if (!categories) {
      rows.push_back(e);
      continue;
    }
    const auto* rec = corpus.find_entity(matrix.entity_ids()[e]);
    if (rec && categories->count(rec->category)) rows.push_back(e);
  }

  SliceResult result;
  std::vector<std::size_t> cols;
  for (std::size_t d = 0; d < matrix.document_count(); ++d) {
    const auto& id = matrix.document_ids()[d];
    if (documents) {
      const auto* rec = corpus.find_document(id);
      if (!rec || !documents(*rec)) continue;
    }
    std::int64_t total = 0;
    for (auto e : rows) total += matrix.at(e, d);
    if (total == 0) {
      result.dropped_documents.push_back(id);
      result.notes.push_back("document `" + id + "` has no mentions in this slice; dropped");
      continue;
    }
    cols.push_back(d);
  }

  if (rows.empty()) throw Error(ErrorKind::EmptySlice, "no entity matches the category filter");
  if (cols.empty()) throw Error(ErrorKind::EmptySlice, "no document with mentions survives the filter");

  std::vector<std::string> entity_ids;
  for (auto e : rows) entity_ids.push_back(matrix.entity_ids()[e]);
  std::vector<std::string> doc_ids;
  for (auto d : cols) doc_ids.push_back(matrix.document_ids()[d]);
  std::vector<std::int64_t> counts;
  counts.reserve(rows.size() * cols.size());
  for (auto e : rows) {
    for (auto d : cols) counts.push_back(matrix.at(e, d));
  }
  result.matrix = MentionMatrix(std::move(entity_ids), std::move(doc_ids), std::move(counts));
  return result;
}

SliceResult slice(const Corpus& corpus, const std::optional<CategorySet>& categories,
                  const DocumentFilter& documents) {
  return slice(corpus, corpus.matrix, categories, documents);
}

MentionMatrix to_presence(const MentionMatrix& matrix) {
  std::vector<std::int64_t> counts(matrix.counts().size());
  std::transform(matrix.counts().begin(), matrix.counts().end(), counts.begin(),
                 [](std::int64_t c) -> std::int64_t { return c >= 1 ? 1 : 0; });
  return MentionMatrix(matrix.entity_ids(), matrix.document_ids(), std::move(counts));
}

}  // namespace chronoclust
