#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace tgk {

// Position of a parsed node inside its source file, for error reporting.
struct SourceRef {
  std::string file;
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  bool operator==(const SourceRef&) const = default;
  std::string to_string() const;
};

enum class ErrorCode {
  MalformedUri,
  MissingContext,
  GrammarError,
  OrphanAtom,
  DuplicateUri,
  UnresolvedReference,
  ImportCycle,
  MorphismDomainMismatch,
  TypeMismatch,
  MissingPlugin,
  UnmappedSymbol,
  InconsistentFacts,
  UnknownRelation,
  UnknownModule,
  NoApplicableNotation,
  NameClash,
  NotFound,
  RevisionUnknown,
  ValidationRejected,
  IoError,
};

const char* error_code_name(ErrorCode code);

// Carries a code plus an optional offending URI or source position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(format(code, message, {})), code_(code), message_(std::move(message)) {}
  Error(ErrorCode code, std::string message, std::string uri)
      : std::runtime_error(format(code, message, uri)),
        code_(code),
        message_(std::move(message)),
        uri_(std::move(uri)) {}
  Error(ErrorCode code, std::string message, SourceRef at)
      : std::runtime_error(format(code, message, at.to_string())),
        code_(code),
        message_(std::move(message)),
        at_(std::move(at)) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }
  const std::optional<std::string>& uri() const { return uri_; }
  const std::optional<SourceRef>& at() const { return at_; }

 private:
  static std::string format(ErrorCode code, const std::string& message, const std::string& where);

  ErrorCode code_;
  std::string message_;
  std::optional<std::string> uri_;
  std::optional<SourceRef> at_;
};

}  // namespace tgk
