#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chronoclust {

enum class ErrorKind {
  // corpus ingestion and validation
  MalformedCsv,
  UnknownReference,
  DuplicateId,
  NegativeCount,
  EmptyDocument,
  InvalidRecord,
  InvalidChronology,
  EmptySlice,
  // similarity
  UnknownDocument,
  ZeroVector,
  LengthMismatch,
  // clustering
  TooFewDocuments,
  BadK,
  EmptyClusterUnrecoverable,
  PartitionMismatch,
  TooLarge,
  MalformedNewick,
  // grid networks
  NonBinaryMatrix,
  UnknownAxisId,
  // chronology metrics
  MissingStage,
  NoRivers,
  InsufficientDocuments,
  // front end
  BadConfig,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One validation finding, located in a source file when known.
struct Issue {
  ErrorKind kind;
  std::string message;
  std::string source;  // file label, empty when not file-bound
  std::size_t line = 0;  // 1-based; 0 when not line-bound

  std::string describe() const;
};

/// Raised when corpus validation finds one or more problems. All findings
/// are collected before throwing.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

}  // namespace chronoclust
