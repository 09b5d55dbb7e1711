#include "tgk/error.hpp"

namespace tgk {

std::string SourceRef::to_string() const {
  std::string s = file;
  s += ":" + std::to_string(line) + ":" + std::to_string(column);
  return s;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedUri: return "MalformedUri";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::GrammarError: return "GrammarError";
    case ErrorCode::OrphanAtom: return "OrphanAtom";
    case ErrorCode::DuplicateUri: return "DuplicateUri";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::ImportCycle: return "ImportCycle";
    case ErrorCode::MorphismDomainMismatch: return "MorphismDomainMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::MissingPlugin: return "MissingPlugin";
    case ErrorCode::UnmappedSymbol: return "UnmappedSymbol";
    case ErrorCode::InconsistentFacts: return "InconsistentFacts";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnknownModule: return "UnknownModule";
    case ErrorCode::NoApplicableNotation: return "NoApplicableNotation";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::RevisionUnknown: return "RevisionUnknown";
    case ErrorCode::ValidationRejected: return "ValidationRejected";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string Error::format(ErrorCode code, const std::string& message, const std::string& where) {
  std::string s = error_code_name(code);
  if (!where.empty()) {
    s += " [" + where + "]";
  }
  s += ": " + message;
  return s;
}

}  // namespace tgk
