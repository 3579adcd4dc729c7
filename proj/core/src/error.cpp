#include "chronoclust/error.hpp"

namespace chronoclust {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::UnknownReference: return "UnknownReference";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::NegativeCount: return "NegativeCount";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::InvalidRecord: return "InvalidRecord";
    case ErrorKind::InvalidChronology: return "InvalidChronology";
    case ErrorKind::EmptySlice: return "EmptySlice";
    case ErrorKind::UnknownDocument: return "UnknownDocument";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewDocuments: return "TooFewDocuments";
    case ErrorKind::BadK: return "BadK";
    case ErrorKind::EmptyClusterUnrecoverable: return "EmptyClusterUnrecoverable";
    case ErrorKind::PartitionMismatch: return "PartitionMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::MalformedNewick: return "MalformedNewick";
    case ErrorKind::NonBinaryMatrix: return "NonBinaryMatrix";
    case ErrorKind::UnknownAxisId: return "UnknownAxisId";
    case ErrorKind::MissingStage: return "MissingStage";
    case ErrorKind::NoRivers: return "NoRivers";
    case ErrorKind::InsufficientDocuments: return "InsufficientDocuments";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::string Issue::describe() const {
  std::string out(to_string(kind));
  if (!source.empty()) {
    out += " [" + source;
    if (line > 0) out += ":" + std::to_string(line);
    out += "]";
  }
  out += ": " + message;
  return out;
}

namespace {
std::string summarize(const std::vector<Issue>& issues) {
  std::string msg = std::to_string(issues.size()) + " validation issue(s)";
  if (!issues.empty()) msg += "; first: " + issues.front().describe();
  return msg;
}
ErrorKind first_kind(const std::vector<Issue>& issues) {
  return issues.empty() ? ErrorKind::InvalidRecord : issues.front().kind;
}
}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(first_kind(issues), summarize(issues)), issues_(std::move(issues)) {}

}  // namespace chronoclust
