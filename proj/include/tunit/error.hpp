#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tunit {

/// 1-based source position. Positions are bookkeeping, not structure: two
/// positions always compare equal so that AST equality ignores them.
struct SourcePos {
  int line = 0;
  int col = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

enum class ErrorCode {
  SyntaxError,
  DuplicateName,
  DuplicateSymbol,
  UnbalancedDirective,
  MalformedExpr,
  UnknownName,
  UnknownProperty,
  ArityMismatch,
  TypeError,
  TemplateNotFound,
  IncludeDepthExceeded,
  WrongFragmentKind,
  KindMismatch,
  UnmatchedInvocation,
  ReservedNameCollision,
  NameCollision,
  IoError,
  SchemaError,
  MissingFile,
  NotFound,
  Ambiguous,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::UnbalancedDirective: return "UnbalancedDirective";
    case ErrorCode::MalformedExpr: return "MalformedExpr";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::TemplateNotFound: return "TemplateNotFound";
    case ErrorCode::IncludeDepthExceeded: return "IncludeDepthExceeded";
    case ErrorCode::WrongFragmentKind: return "WrongFragmentKind";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::UnmatchedInvocation: return "UnmatchedInvocation";
    case ErrorCode::ReservedNameCollision: return "ReservedNameCollision";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Ambiguous: return "Ambiguous";
  }
  return "Error";
}

/// The single exception type thrown by the library. `code()` identifies the
/// failure class; `pos()` is set for errors tied to a source location.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourcePos> pos = std::nullopt)
      : std::runtime_error(format(code, message, pos)),
        code_(code),
        detail_(message),
        pos_(pos) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourcePos>& pos() const noexcept { return pos_; }
  /// Message without the code/position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            const std::optional<SourcePos>& pos) {
    std::string out(to_string(code));
    if (pos) {
      out += " at " + std::to_string(pos->line) + ":" + std::to_string(pos->col);
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::string detail_;
  std::optional<SourcePos> pos_;
};

}  // namespace tunit
