#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace chronoclust {

enum class Category { Single, Dual, Group, River };

std::string_view to_string(Category category) noexcept;
std::optional<Category> parse_category(std::string_view text) noexcept;

using CategorySet = std::set<Category>;

struct EntityRecord {
  std::string id;
  std::string display_name;
  Category category = Category::Single;
  std::vector<std::string> members;  // dual: exactly 2, group: >= 2
  std::optional<int> geo_ordinal;    // rivers only; 1 = westernmost
  std::string notes;

  bool operator==(const EntityRecord&) const = default;
};

/// A document as declared in documents.csv. stage/rank are the declared
/// values; the effective labels live in Corpus::chronology.
struct DocumentRecord {
  std::string id;
  int index = 0;
  bool is_family = false;
  std::optional<std::string> stage;
  std::optional<int> rank;

  bool operator==(const DocumentRecord&) const = default;
};

/// Entities x documents grid of nonnegative counts, stored row-major.
class MentionMatrix {
 public:
  MentionMatrix() = default;

  /// Throws Error(LengthMismatch) when counts.size() != rows * cols and
  /// Error(NegativeCount) for any negative entry.
  MentionMatrix(std::vector<std::string> entity_ids, std::vector<std::string> document_ids,
                std::vector<std::int64_t> counts);

  std::size_t entity_count() const noexcept { return entity_ids_.size(); }
  std::size_t document_count() const noexcept { return document_ids_.size(); }

  const std::vector<std::string>& entity_ids() const noexcept { return entity_ids_; }
  const std::vector<std::string>& document_ids() const noexcept { return document_ids_; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  std::int64_t at(std::size_t entity, std::size_t document) const {
    return counts_[entity * document_ids_.size() + document];
  }

  std::optional<std::size_t> entity_index(std::string_view id) const noexcept;
  std::optional<std::size_t> document_index(std::string_view id) const noexcept;

  std::int64_t row_total(std::size_t entity) const noexcept;
  std::int64_t column_total(std::size_t document) const noexcept;
  bool is_binary() const noexcept;

  bool operator==(const MentionMatrix&) const = default;

 private:
  std::vector<std::string> entity_ids_;
  std::vector<std::string> document_ids_;
  std::vector<std::int64_t> counts_;
};

struct StageAssignment {
  std::string stage;
  int rank = 0;

  bool operator==(const StageAssignment&) const = default;
};

/// A chronology hypothesis: ordered stage labels plus a (stage, rank) per
/// document. Every document of an earlier stage must have a strictly
/// smaller rank than every document of a later stage.
struct ChronologyReference {
  std::string name;
  std::vector<std::string> stages;
  std::map<std::string, StageAssignment> assignment;

  bool empty() const noexcept { return assignment.empty(); }
  std::optional<std::size_t> stage_position(std::string_view stage) const noexcept;
  const StageAssignment* find(std::string_view document_id) const noexcept;

  /// Throws ValidationError (InvalidChronology issues) when a stage is
  /// unlisted or ranks contradict the stage order.
  void validate() const;

  bool operator==(const ChronologyReference&) const = default;
};

/// Built-in ordering of the ten Mandalas used when a corpus declares no
/// stages: early {M6,M3,M7}, middle {M4,M2}, late {M5,M8,M1,M9,M10}.
/// M9 sits between M1 and M10 (rank 9) since no exact position is given.
ChronologyReference builtin_chronology();

struct Corpus {
  std::vector<EntityRecord> entities;
  std::vector<DocumentRecord> documents;
  MentionMatrix matrix;
  ChronologyReference chronology;

  const EntityRecord* find_entity(std::string_view id) const noexcept;
  const DocumentRecord* find_document(std::string_view id) const noexcept;

  bool operator==(const Corpus&) const = default;
};

/// Raw text of the canonical CSV inputs.
struct CorpusText {
  std::string entities;
  std::string documents;
  std::string mentions;
  std::optional<std::string> chronology;
};

/// Parses and validates a corpus. Every problem found across the three
/// files is collected; if any exist a ValidationError carrying all of them
/// is thrown. A chronology override, when given, replaces stages declared
/// in documents.csv.
Corpus parse_corpus(std::string_view entity_csv, std::string_view document_csv,
                    std::string_view mention_csv,
                    std::optional<std::string_view> chronology_csv = std::nullopt);

Corpus parse_corpus(const CorpusText& text);

/// Parses chronology.csv (document_id,stage,rank). Stages are ordered by
/// their smallest rank.
ChronologyReference parse_chronology(std::string_view csv, std::string name = "chronology.csv");

/// Emits canonical CSV that parses back to an equal Corpus.
CorpusText serialize_corpus(const Corpus& corpus);
std::string serialize_chronology(const ChronologyReference& chronology);

using DocumentFilter = std::function<bool(const DocumentRecord&)>;

struct SliceResult {
  MentionMatrix matrix;
  std::vector<std::string> dropped_documents;  // all-zero after slicing
  std::vector<std::string> notes;
};

/// Restricts a matrix to entities of the given categories and documents
/// accepted by the filter, preserving corpus order. Documents whose sliced
/// column is all zero are dropped and noted. `matrix` must be indexed by the
/// corpus catalog (the corpus matrix or its presence form).
/// Throws Error(EmptySlice) if no entity or no document survives.
SliceResult slice(const Corpus& corpus, const MentionMatrix& matrix,
                  const std::optional<CategorySet>& categories, const DocumentFilter& documents);

SliceResult slice(const Corpus& corpus, const std::optional<CategorySet>& categories,
                  const DocumentFilter& documents);

/// Replaces every count c by 1 if c >= 1, else 0.
MentionMatrix to_presence(const MentionMatrix& matrix);

}  // namespace chronoclust
